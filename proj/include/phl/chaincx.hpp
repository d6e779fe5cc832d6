#ifndef PHL_CHAINCX_HPP
#define PHL_CHAINCX_HPP

#include <optional>
#include <vector>

#include "phl/modrep.hpp"

namespace phl {

/// Bounded cochain complex of left modules; d^n: X^n -> X^{n+1}.
/// Terms outside [lo, hi] are zero. The constructor checks that every d^n is
/// a module map and that d^{n+1} d^n = 0 (InputError otherwise).
template <class K>
class Complex
{
public:
    Complex() = default;
    Complex(AlgebraPtr<K> alg, int lo, std::vector<Module<K>> terms, std::vector<Mat<K>> diffs);

    const AlgebraPtr<K>& alg() const { return alg_; }
    const Field<K>& field() const { return alg_->field(); }
    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(terms_.size()) - 1; }
    bool empty() const { return terms_.empty(); }
    bool contains(int n) const { return n >= lo() && n <= hi(); }

    Module<K> term(int n) const;
    Index dim(int n) const { return contains(n) ? terms_[static_cast<std::size_t>(n - lo_)].dim() : 0; }
    /// d^n, a zero matrix of the right shape outside the support.
    Mat<K> d(int n) const;
    Index total_dim() const;

    const std::vector<Module<K>>& terms() const { return terms_; }
    const std::vector<Mat<K>>& diffs() const { return diffs_; }

private:
    AlgebraPtr<K> alg_;
    int lo_ = 0;
    std::vector<Module<K>> terms_;
    /// d^lo, ..., d^{hi-1}.
    std::vector<Mat<K>> diffs_;
};

template <class K>
Complex<K> zero_complex(const AlgebraPtr<K>& a);

/// M concentrated in degree n.
template <class K>
Complex<K> stalk(const Module<K>& m, int n = 0);

/// Drops zero terms at both ends.
template <class K>
Complex<K> trim(const Complex<K>& x);

template <class K>
Complex<K> complex_sum(const Complex<K>& x, const Complex<K>& y);

template <class K>
bool is_acyclic(const Complex<K>& x);

/// f^n: X^n -> Y^n, one matrix per degree of the source support.
template <class K>
struct ChainMap
{
    Complex<K> source, target;
    std::vector<Mat<K>> comps;

    Mat<K> at(int n) const;
};

/// h^n: X^n -> Y^{n-1}, one matrix per degree of the source support.
template <class K>
struct Homotopy
{
    Complex<K> source, target;
    std::vector<Mat<K>> comps;

    Mat<K> at(int n) const;
};

/// Builds from a per-degree callback n -> matrix over the source support.
template <class K, class F>
ChainMap<K> chain_map(const Complex<K>& x, const Complex<K>& y, F&& comp)
{
    ChainMap<K> f{x, y, {}};
    for (int n = x.lo(); n <= x.hi(); ++n)
        f.comps.push_back(comp(n));
    return f;
}

template <class K>
bool is_chain_map(const ChainMap<K>& f);
template <class K>
ChainMap<K> identity_map(const Complex<K>& x);
template <class K>
ChainMap<K> zero_map(const Complex<K>& x, const Complex<K>& y);
template <class K>
ChainMap<K> compose(const ChainMap<K>& g, const ChainMap<K>& f);
template <class K>
ChainMap<K> operator+(const ChainMap<K>& f, const ChainMap<K>& g);
template <class K>
ChainMap<K> operator-(const ChainMap<K>& f, const ChainMap<K>& g);
template <class K>
ChainMap<K> scale(const K& a, const ChainMap<K>& f);
template <class K>
bool operator==(const ChainMap<K>& f, const ChainMap<K>& g);
/// Invertible in every degree.
template <class K>
bool is_chain_iso(const ChainMap<K>& f);

template <class K>
Homotopy<K> zero_homotopy(const Complex<K>& x, const Complex<K>& y);
/// d h + h d.
template <class K>
ChainMap<K> boundary(const Homotopy<K>& h);
/// f - g = d h + h d.
template <class K>
bool is_homotopy(const ChainMap<K>& f, const ChainMap<K>& g, const Homotopy<K>& h);
/// a h b for chain maps a: Y -> Y', b: X' -> X.
template <class K>
Homotopy<K> sandwich(const ChainMap<K>& a, const Homotopy<K>& h, const ChainMap<K>& b);
template <class K>
Homotopy<K> operator+(const Homotopy<K>& h, const Homotopy<K>& k);

template <class K>
struct Homology
{
    SubModule<K> cycles;
    Subspace<K> cycle_space;
    /// Cycles modulo boundaries, in cycle coordinates.
    QuotientModule<K> q;

    const Module<K>& module() const { return q.module; }
};

template <class K>
Homology<K> homology(const Complex<K>& x, int n);

/// H^n(f) on the homology bases.
template <class K>
Mat<K> homology_map(const ChainMap<K>& f, int n);

template <class K>
bool is_quasi_iso(const ChainMap<K>& f);

/// C^n = X^{n+1} (+) Y^n, d = [[-d_X, 0], [f, d_Y]].
template <class K>
Complex<K> cone(const ChainMap<K>& f);

/// Graded Hom_A(X^n, Y^{n+shift}) over the source support, parametrised by
/// the concatenated Hom bases.
template <class K>
struct GradedHom
{
    Complex<K> source, target;
    int shift = 0;
    std::vector<HomSpace<K>> homs;
    std::vector<Index> offsets;
    Index dim = 0;

    std::vector<Mat<K>> element(const Vec<K>& c) const;
    Vec<K> coords(const std::vector<Mat<K>>& comps) const;
};

template <class K>
GradedHom<K> graded_hom(const Complex<K>& x, const Complex<K>& y, int shift);

/// Concatenated vectorisations.
template <class K>
Vec<K> flatten(const Field<K>& field, const std::vector<Mat<K>>& comps);

/// Length of flattened graded maps X^n -> Y^{n+shift}.
template <class K>
Index flat_size(const Complex<K>& x, const Complex<K>& y, int shift)
{
    Index s = 0;
    for (int n = x.lo(); n <= x.hi(); ++n)
        s += x.dim(n) * y.dim(n + shift);
    return s;
}

/// Matrix of a linear map given by its values on unit vectors.
template <class K, class F>
Mat<K> op_matrix(const Field<K>& f, Index in, Index out, F&& apply)
{
    Mat<K> m = zeros(f, out, in);
    for (Index k = 0; k < in; ++k) {
        Vec<K> e = zeros(f, in, 1);
        e(k) = f.one();
        m.col(k) = apply(e);
    }
    return m;
}

/// d_Y f - f d_X on graded_hom(X, Y, 0) coordinates.
template <class K>
Mat<K> chain_condition(const GradedHom<K>& g);
/// h -> d h + h d on graded_hom(X, Y, -1) coordinates, flattened as degree 0 maps.
template <class K>
Mat<K> boundary_matrix(const GradedHom<K>& g);
/// Coordinates -> flattened maps.
template <class K>
Mat<K> embed_matrix(const GradedHom<K>& g);

/// Chain maps X -> Y modulo null-homotopic ones.
template <class K>
struct HomotopyHom
{
    GradedHom<K> maps, homotopies;
    /// Chain maps and null-homotopic maps, in `maps` coordinates.
    Subspace<K> cycles, bounds;
    /// Cycle coordinates modulo bounds.
    Quotient<K> classes;

    Index dim() const { return classes.dim(); }
    ChainMap<K> element(Index k) const;
    std::vector<ChainMap<K>> basis() const;
    /// Class of a chain map in the quotient basis.
    Vec<K> class_of(const ChainMap<K>& f) const;
    ChainMap<K> from_maps_coords(const Vec<K>& c) const;
};

template <class K>
HomotopyHom<K> homotopy_hom(const Complex<K>& x, const Complex<K>& y);

template <class K>
std::optional<Homotopy<K>> null_homotopy_witness(const ChainMap<K>& f);

template <class K>
struct HomotopyInverse
{
    ChainMap<K> g;
    /// id_X - g f = d h + h d and id_Y - f g = d k + k d.
    Homotopy<K> left, right;
};

template <class K>
std::optional<HomotopyInverse<K>> homotopy_inverse(const ChainMap<K>& f);

template <class K>
struct TensorComplex
{
    Complex<K> cx;
    /// One tensor module per degree of the support of the input.
    std::vector<TensorModule<K>> parts;
    Index bdim = 0;
};

/// B (x)_A X degreewise for a (C, A)-bimodule B.
template <class K>
TensorComplex<K> tensor_complex(const Bimodule<K>& b, const Complex<K>& x);
/// B (x) f.
template <class K>
ChainMap<K> tensor_chain_map(const TensorComplex<K>& s, const TensorComplex<K>& t, const ChainMap<K>& f);
template <class K>
Homotopy<K> tensor_homotopy(const TensorComplex<K>& s, const TensorComplex<K>& t, const Homotopy<K>& h);

/// Degreewise induction along f, keeping the canonical maps.
template <class K>
struct InducedComplex
{
    Complex<K> cx;
    std::vector<Induced<K>> parts;
};

template <class K>
InducedComplex<K> induce_complex(const AlgebraMorphism<K>& f, const Complex<K>& x);
template <class K>
ChainMap<K> induce_chain_map(const InducedComplex<K>& s, const InducedComplex<K>& t, const ChainMap<K>& f);
template <class K>
Homotopy<K> induce_homotopy(const InducedComplex<K>& s, const InducedComplex<K>& t, const Homotopy<K>& h);

template <class K>
bool is_projective_complex(const Complex<K>& x);

/// im d^n inside rad X^{n+1} for every n.
template <class K>
bool is_minimal(const Complex<K>& x);

template <class K>
struct Minimization
{
    Complex<K> q;
    ChainMap<K> iota;  // Q -> P
    ChainMap<K> rho;   // P -> Q
    /// id_P - iota rho = d h + h d.
    Homotopy<K> h;
    int cancelled = 0;
};

/// Gaussian elimination: repeatedly cancels the first isomorphic component
/// between indecomposable summands (lowest degree first). Verifies
/// rho iota = id, the homotopy and minimality before returning.
template <class K>
Minimization<K> minimize(const Complex<K>& p);

template <class K>
struct Resolution
{
    Complex<K> p;
    /// P -> X, a quasi-isomorphism.
    ChainMap<K> eps;
};

/// Projective replacement reaching at most `depth` degrees below lo(X).
/// Throws HardFailure("pd bound exceeded at depth d") when it cannot close.
template <class K>
Resolution<K> resolve_bounded(const Complex<K>& x, int depth);

} // namespace phl

#endif // PHL_CHAINCX_HPP
