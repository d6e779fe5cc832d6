#ifndef PHL_ALGEBRA_HPP
#define PHL_ALGEBRA_HPP

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "phl/diagnostics.hpp"
#include "phl/exactlin.hpp"

namespace phl {

enum class RadicalSource { trace_form, supplied, construction };
enum class Maximality { trace_form, split_basic, asserted };

std::string to_string(RadicalSource s);
std::string to_string(Maximality m);

template <class K>
struct RadicalInfo
{
    Subspace<K> space;
    RadicalSource source = RadicalSource::trace_form;
    Maximality maximality = Maximality::asserted;
    int nilpotency_index = 1;
};

/// A complete list of orthogonal idempotents lifted from the semisimple
/// quotient, with the data needed for projective covers.
template <class K>
struct IdempotentInfo
{
    std::vector<Vec<K>> idems;
    /// A e_i and A e_j are isomorphic iff iso_class agrees.
    std::vector<int> iso_class;
    /// dim e_i (A/J) e_i, the dimension of the endomorphism ring of the top.
    std::vector<Index> end_dim;
    std::vector<bool> primitive_certified;
    std::string primitivity;

    int class_count() const
    {
        int m = -1;
        for (int c : iso_class)
            m = std::max(m, c);
        return m + 1;
    }
    /// One idempotent index per isomorphism class, in class order.
    std::vector<Index> representatives() const
    {
        std::vector<Index> rep(static_cast<std::size_t>(class_count()), -1);
        for (std::size_t i = 0; i < iso_class.size(); ++i)
            if (rep[iso_class[i]] < 0)
                rep[iso_class[i]] = static_cast<Index>(i);
        return rep;
    }
};

template <class K>
struct EquipOptions
{
    std::optional<Mat<K>> radical;
    RadicalSource radical_source = RadicalSource::supplied;
    std::optional<std::vector<Vec<K>>> idempotents;
    /// Complete orthogonal idempotents of A to refine (block idempotents of a
    /// triangular ring, say); defaults to the unit.
    std::optional<std::vector<Vec<K>>> initial_idempotents;
    std::uint64_t seed = 1;
    std::uint64_t ceiling = std::uint64_t(1) << 16;
    /// Skip radical and idempotent computation altogether.
    bool bare = false;
};

/// Finite-dimensional associative unital algebra given by structure
/// constants. left(i) is left multiplication by b_i, so
/// left(i)(k, j) = c[i][j][k].
template <class K>
class Algebra
{
public:
    Algebra(Field<K> field, std::vector<std::string> names, std::vector<Mat<K>> left, Vec<K> unit);

    const Field<K>& field() const { return field_; }
    Index dim() const { return static_cast<Index>(left_.size()); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(Index i) const { return names_[static_cast<std::size_t>(i)]; }

    const Mat<K>& left(Index i) const { return left_[static_cast<std::size_t>(i)]; }
    const Mat<K>& right(Index j) const { return right_[static_cast<std::size_t>(j)]; }
    const std::vector<Mat<K>>& left_all() const { return left_; }
    K sc(Index i, Index j, Index k) const { return left_[static_cast<std::size_t>(i)](k, j); }

    Mat<K> left_mult(const Vec<K>& x) const;
    Mat<K> right_mult(const Vec<K>& y) const;
    Vec<K> mult(const Vec<K>& x, const Vec<K>& y) const;
    const Vec<K>& unit() const { return unit_; }
    Vec<K> basis_vector(Index i) const;
    Vec<K> zero_vector() const { return Vec<K>::Constant(dim(), field_.zero()); }

    /// Indices of basis elements generating A as an algebra.
    const std::vector<Index>& generators() const { return generators_; }

    bool has_radical() const { return radical_.has_value(); }
    const RadicalInfo<K>& radical() const;
    bool has_idempotents() const { return idempotents_.has_value(); }
    const IdempotentInfo<K>& idempotents() const;

    /// "1+x" style rendering of a coordinate vector.
    std::string describe(const Vec<K>& x) const;

    /// Computes radical and idempotent data; only meaningful before the
    /// algebra is shared.
    void equip(const EquipOptions<K>& options);

private:
    Field<K> field_;
    std::vector<std::string> names_;
    std::vector<Mat<K>> left_;
    std::vector<Mat<K>> right_;
    Vec<K> unit_;
    std::vector<Index> generators_;
    std::optional<RadicalInfo<K>> radical_;
    std::optional<IdempotentInfo<K>> idempotents_;
};

template <class K>
using AlgebraPtr = std::shared_ptr<const Algebra<K>>;

/// Checks associativity (naming (i,j,m,k)), unit laws and shapes.
template <class K>
Diagnostics validate_algebra(const Field<K>& field, const std::vector<Mat<K>>& left, const Vec<K>& unit);

/// Validates, builds and equips; throws InputError with the first violated
/// identity on invalid data.
template <class K>
AlgebraPtr<K> make_algebra(Field<K> field, std::vector<std::string> names, std::vector<Mat<K>> left,
                           Vec<K> unit, const EquipOptions<K>& options = {});

/// Algebra whose multiplication is given by a bilinear function on
/// coordinate vectors.
template <class K>
AlgebraPtr<K> algebra_from_product(Field<K> field, std::vector<std::string> names, Vec<K> unit,
                                   const std::function<Vec<K>(const Vec<K>&, const Vec<K>&)>& product,
                                   const EquipOptions<K>& options = {});

template <class K>
struct AlgebraMorphism
{
    AlgebraPtr<K> source;
    AlgebraPtr<K> target;
    Mat<K> mat;
    std::string name;

    Vec<K> operator()(const Vec<K>& x) const { return mat * x; }
};

template <class K>
Diagnostics validate_morphism(const AlgebraMorphism<K>& f);

template <class K>
AlgebraMorphism<K> identity_morphism(const AlgebraPtr<K>& a, std::string name = "id");

template <class K>
AlgebraMorphism<K> compose(const AlgebraMorphism<K>& g, const AlgebraMorphism<K>& f);

template <class K>
bool is_surjective(const AlgebraMorphism<K>& f);

template <class K>
struct Ideal
{
    AlgebraPtr<K> parent;
    Subspace<K> space;

    Index dim() const { return space.dim(); }
};

template <class K>
Diagnostics verify_ideal(const Algebra<K>& a, const Subspace<K>& j);

template <class K>
Ideal<K> kernel_ideal(const AlgebraMorphism<K>& f);

struct Nilpotency
{
    bool nilpotent = false;
    /// Smallest n with J^n = 0 (1 for the zero ideal).
    int index = 0;
};

template <class K>
Nilpotency is_nilpotent_ideal(const Algebra<K>& a, const Subspace<K>& j);

/// Product J*L of subspaces of A.
template <class K>
Subspace<K> product_space(const Algebra<K>& a, const Subspace<K>& j, const Subspace<K>& l);

enum class Tristate { yes, no, unknown };
std::string to_string(Tristate t);

/// Sufficient criterion only: J nilpotent or J inside the radical.
template <class K>
Tristate is_universally_superfluous_sufficient(const Algebra<K>& a, const Subspace<K>& j);

template <class K>
bool trace_criterion_applies(const Algebra<K>& a);

/// Kernel of the trace form (x, y) -> tr(L_{xy}), post-verified.
template <class K>
Subspace<K> radical(const Algebra<K>& a);

template <class K>
struct RadicalCheck
{
    Diagnostics diag;
    Maximality maximality = Maximality::asserted;
    int nilpotency_index = 0;
};

template <class K>
RadicalCheck<K> verify_radical(const Algebra<K>& a, const Subspace<K>& j);

/// Newton lifting with sequential orthogonalisation. The input list must
/// be complete and orthogonal modulo J.
template <class K>
std::vector<Vec<K>> lift_idempotents(const Algebra<K>& a, const Subspace<K>& j,
                                     const std::vector<Vec<K>>& idems_mod_rad);

/// Split-basic certificate: complete orthogonal idempotents with
/// dim e_i (A/J) e_j = [i == j] prove A/J is a product of copies of k.
template <class K>
bool split_basic_certificate(const Algebra<K>& a, const Subspace<K>& j, const std::vector<Vec<K>>& idems);

/// Upper triangular ring [[B, M], [0, A]] for a (B, A)-bimodule M given by
/// its left action matrices (one per B-basis vector) and right action
/// matrices (m . a = ract[a] m). Basis order: B, M, A.
template <class K>
AlgebraPtr<K> triangular(const AlgebraPtr<K>& b, const AlgebraPtr<K>& a, Index mdim,
                         const std::vector<Mat<K>>& lact, const std::vector<Mat<K>>& ract,
                         const std::vector<std::string>& mnames);

template <class K>
struct PullbackData
{
    AlgebraMorphism<K> pi1, pi2, i1, i2;

    const AlgebraPtr<K>& R() const { return i1.source; }
    const AlgebraPtr<K>& R1() const { return pi1.source; }
    const AlgebraPtr<K>& R2() const { return pi2.source; }
    const AlgebraPtr<K>& Rp() const { return pi1.target; }
};

template <class K>
PullbackData<K> pullback(const AlgebraMorphism<K>& pi1, const AlgebraMorphism<K>& pi2);

template <class K>
Diagnostics verify_pullback(const PullbackData<K>& d);

/// A^op on the same basis; radical and idempotents carried over when present.
template <class K>
AlgebraPtr<K> opposite(const AlgebraPtr<K>& a);

/// [[R, R1], [I1, R1]] with I1 = Ker pi1; basis order R, R1 (1,2), I1, R1 (2,2).
template <class K>
AlgebraPtr<K> gamma_prime(const PullbackData<K>& d);

/// k[x]/(x^n) with basis 1, x, ..., x^(n-1); the radical span{x, ...} is
/// recorded as known from the construction.
template <class K>
AlgebraPtr<K> truncated_polynomial(const Field<K>& field, int n, const std::string& var = "x");

/// k^n with basis the coordinate idempotents e1..en ("1" when n = 1).
template <class K>
AlgebraPtr<K> diagonal_algebra(const Field<K>& field, int n);

/// Full matrix algebra M_n(k) with basis E11, E12, ...
template <class K>
AlgebraPtr<K> matrix_algebra(const Field<K>& field, int n, const EquipOptions<K>& options = {});

} // namespace phl

#endif // PHL_ALGEBRA_HPP
