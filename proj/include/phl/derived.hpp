#ifndef PHL_DERIVED_HPP
#define PHL_DERIVED_HPP

#include <functional>
#include <random>
#include <tuple>

#include "phl/chaincx.hpp"
#include "phl/gamma.hpp"

namespace phl {

/// (P1, P2; c) with P_i bounded complexes of projectives over R_i and
/// c: R' (x) P1 -> R' (x) P2 a chain map of R'-complexes.
template <class K>
struct DerivedTriple
{
    PullbackData<K> data;
    Complex<K> p1, p2;
    /// R' (x)_{R1} P1 and R' (x)_{R2} P2.
    InducedComplex<K> ind1, ind2;
    ChainMap<K> c;
};

/// Throws InputError unless the legs are over R1, R2 and c is a chain map.
template <class K>
DerivedTriple<K> make_derived_triple(const PullbackData<K>& d, const Complex<K>& p1, const Complex<K>& p2,
                                     const ChainMap<K>& c);

template <class K>
DerivedTriple<K> zero_derived_triple(const PullbackData<K>& d);

/// c is a quasi-isomorphism.
template <class K>
bool is_gluing(const DerivedTriple<K>& t);

/// (f1, f2) with c' (R' (x) f1) - (R' (x) f2) c = d w + w d.
template <class K>
struct DTrMorphism
{
    ChainMap<K> f1, f2;
    Homotopy<K> witness;
};

template <class K>
bool is_dtr_morphism(const DerivedTriple<K>& s, const DerivedTriple<K>& t, const DTrMorphism<K>& m);

/// R' (x) f1 and R' (x) f2 between the induced legs.
template <class K>
ChainMap<K> push1(const DerivedTriple<K>& s, const DerivedTriple<K>& t, const ChainMap<K>& f1);
template <class K>
ChainMap<K> push2(const DerivedTriple<K>& s, const DerivedTriple<K>& t, const ChainMap<K>& f2);

/// Completes (f1, f2) with a compatibility witness when one exists.
template <class K>
std::optional<DTrMorphism<K>> dtr_morphism(const DerivedTriple<K>& s, const DerivedTriple<K>& t,
                                           const ChainMap<K>& f1, const ChainMap<K>& f2);

template <class K>
DTrMorphism<K> compose(const DerivedTriple<K>& a, const DerivedTriple<K>& b, const DerivedTriple<K>& c,
                       const DTrMorphism<K>& g, const DTrMorphism<K>& f);

template <class K>
struct DIndResult
{
    Complex<K> p;
    /// R1 (x)_R P and R2 (x)_R P.
    InducedComplex<K> leg1, leg2;
    DerivedTriple<K> triple;
};

/// Degreewise Ind on a bounded complex of projectives; refuses other input.
template <class K>
DIndResult<K> ind_L(const PullbackData<K>& d, const Complex<K>& p);

/// (R1 (x) g, R2 (x) g) with the zero witness.
template <class K>
DTrMorphism<K> ind_L_map(const DIndResult<K>& s, const DIndResult<K>& t, const ChainMap<K>& g);

/// Pairs of homotopy classes compatible up to homotopy, from one joint
/// linear system in (f1, f2, w).
template <class K>
struct PairHom
{
    HomotopyHom<K> h1, h2;
    GradedHom<K> w;
    /// (a, b) in h1.maps (+) h2.maps coordinates that admit a witness.
    Subspace<K> pairs;
    Subspace<K> null_pairs;
    Quotient<K> classes;
    /// `pairs` coordinates -> `w` coordinates of a compatibility witness.
    Mat<K> witnesses;
    /// (f1, f2) -> the chain map whose null-homotopy is the compatibility.
    std::function<ChainMap<K>(const ChainMap<K>&, const ChainMap<K>&)> compat;

    Index dim() const { return classes.dim(); }
    /// Representative pair with its witness.
    std::tuple<ChainMap<K>, ChainMap<K>, Homotopy<K>> element(Index k) const;
    Vec<K> class_of(const ChainMap<K>& f1, const ChainMap<K>& f2) const;
};

template <class K>
PairHom<K> pair_hom(const Complex<K>& x1, const Complex<K>& y1, const Complex<K>& x2, const Complex<K>& y2,
                    const Complex<K>& wsrc, const Complex<K>& wtgt,
                    std::function<ChainMap<K>(const ChainMap<K>&, const ChainMap<K>&)> compat);

template <class K>
struct DtrHom
{
    DerivedTriple<K> source, target;
    PairHom<K> pairs;

    Index dim() const { return pairs.dim(); }
    DTrMorphism<K> element(Index k) const;
    std::vector<DTrMorphism<K>> basis() const;
};

template <class K>
DtrHom<K> dtr_hom(const DerivedTriple<K>& s, const DerivedTriple<K>& t);

/// (X1, X2; phi~) with phi~: R'* (x)_{R1} X1 -> X2.
template <class K>
struct CommaObject
{
    GammaRingPtr<K> ring;
    Complex<K> x1, x2;
    TensorComplex<K> dx1;
    ChainMap<K> phi;
};

/// A complex of Gamma-modules in block presentation.
template <class K>
struct GammaComplex
{
    GammaRingPtr<K> ring;
    int lo = 0;
    std::vector<GammaModule<K>> terms;
    /// Pairs (d2, d1) of the block-diagonal differentials.
    std::vector<std::pair<Mat<K>, Mat<K>>> diffs;
};

template <class K>
CommaObject<K> psi_view(const GammaComplex<K>& g);

/// Phi degreewise on the legs: phi~^n = phi(P1^n, P2^n; c^n). Refuses unless
/// R' is f.g. projective over R2.
template <class K>
CommaObject<K> dphi(const GammaRingPtr<K>& ring, const DerivedTriple<K>& t);

/// Pairs (f1, f2) with f2 phi ~ phi' (R'* (x) f1) modulo homotopy.
template <class K>
PairHom<K> comma_hom(const CommaObject<K>& s, const CommaObject<K>& t);

/// dim dtr_hom(s, t) = dim comma_hom(dphi s, dphi t).
template <class K>
Diagnostics dphi_hom_check(const GammaRingPtr<K>& ring, const DerivedTriple<K>& s, const DerivedTriple<K>& t);

template <class K>
struct Preimage
{
    ChainMap<K> g;
    /// R_i (x) g - f_i = d h_i + h_i d.
    Homotopy<K> h1, h2;
};

/// g: P -> Q with Ind^L(g) ~ m. HardFailure if none exists.
template <class K>
Preimage<K> fullness_witness(const DIndResult<K>& p, const DIndResult<K>& q, const DTrMorphism<K>& m);
/// The same for several morphisms over one linear system.
template <class K>
std::vector<Preimage<K>> fullness_witnesses(const DIndResult<K>& p, const DIndResult<K>& q,
                                            const std::vector<DTrMorphism<K>>& ms);

template <class K>
struct KernelBasis
{
    HomotopyHom<K> hom;
    /// Representatives with null-homotopies of both legs.
    std::vector<Preimage<K>> elements;
};

template <class K>
KernelBasis<K> kernel_basis(const DIndResult<K>& p, const DIndResult<K>& q);

/// v u ~ 0 for all kernel basis elements u: X -> Y, v: Y -> Z.
template <class K>
Diagnostics square_zero_check(const PullbackData<K>& d, const std::vector<Complex<K>>& objects);

/// Lemma argument on sampled endomorphisms: Ind^L(g) invertible implies g a
/// homotopy equivalence, with the inverse built from a fullness preimage.
template <class K>
Diagnostics detects_iso_check(const PullbackData<K>& d, const std::vector<Complex<K>>& objects, std::mt19937_64& rng);

/// pi2(rad R2) and pi1(rad R1) inside rad R'.
template <class K>
Diagnostics radical_condition(const PullbackData<K>& d);
template <class K>
bool radical_condition_check(const PullbackData<K>& d);

template <class K>
struct DensityLift
{
    Complex<K> p;
    Minimization<K> m1, m2;
    /// Transported c between the minimal legs; degreewise invertible.
    ChainMap<K> c_min;
    /// Ind^L(P) -> T.
    DIndResult<K> ind;
    DTrMorphism<K> iso;
    Diagnostics diag;
};

/// Lifts a gluing derived triple to a bounded complex of projectives over R.
/// HypothesisRefused names the failing hypothesis.
template <class K>
DensityLift<K> density_lift(const DerivedTriple<K>& t);

/// Hom_K(P, Q) against Hom_K((R2;R1) (x) P, (R2;R1) (x) Q) over Gamma.
template <class K>
Diagnostics cor_ff_check(const GammaRingPtr<K>& ring, const std::vector<Complex<K>>& objects);

struct ComplexOptions
{
    int max_support = 4;
    Index max_dim = 6;
};

/// Random bounded complex of f.g. projectives over R.
template <class K>
Complex<K> random_projective_complex(const AlgebraPtr<K>& a, std::mt19937_64& rng, const ComplexOptions& o = {});

/// Random gluing derived triple: Ind^L of a random complex with c twisted by
/// a random automorphism of the second leg.
template <class K>
DerivedTriple<K> random_twisted_triple(const PullbackData<K>& d, std::mt19937_64& rng, const ComplexOptions& o = {});

struct SuiteOptions
{
    int seeds = 5;
    std::uint64_t seed = 1;
    ComplexOptions complexes;
};

/// Fullness, kernel, square-zero, iso detection, density, cor_ff and DPhi
/// checks on seeded samples. E2-style data gets a refusal plus the
/// counterexample.
template <class K>
std::vector<Check> epivalence_suite(const PullbackData<K>& d, const SuiteOptions& options = {});

} // namespace phl

#endif // PHL_DERIVED_HPP
