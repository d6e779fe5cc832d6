#ifndef PHL_MODREP_HPP
#define PHL_MODREP_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "phl/algebra.hpp"

namespace phl {

enum class Side { left, right };

/// Finite-dimensional representation: one action matrix per basis vector of
/// the algebra. For right modules m . b_i = act(i) m, so the action law is
/// act(i) act(j) = act(b_j b_i).
template <class K>
class Module
{
public:
    Module() = default;
    Module(AlgebraPtr<K> alg, Index dim, std::vector<Mat<K>> act, Side side = Side::left);

    const AlgebraPtr<K>& alg() const { return alg_; }
    const Field<K>& field() const { return alg_->field(); }
    Index dim() const { return dim_; }
    Side side() const { return side_; }
    const Mat<K>& act(Index i) const { return (*act_)[static_cast<std::size_t>(i)]; }
    const std::vector<Mat<K>>& acts() const { return *act_; }
    /// Action of an arbitrary algebra element.
    Mat<K> act_of(const Vec<K>& a) const;

private:
    AlgebraPtr<K> alg_;
    Index dim_ = 0;
    std::shared_ptr<const std::vector<Mat<K>>> act_;
    Side side_ = Side::left;
};

template <class K>
Diagnostics validate_module(const Module<K>& m);

/// Validates and throws InputError on failure.
template <class K>
Module<K> make_module(AlgebraPtr<K> alg, Index dim, std::vector<Mat<K>> act, Side side = Side::left);

template <class K>
struct ModuleMorphism
{
    Module<K> source;
    Module<K> target;
    Mat<K> mat;
};

template <class K>
bool is_morphism(const Module<K>& m, const Module<K>& n, const Mat<K>& f);

/// (A, B)-bimodule: left action by A, right action by B, commuting.
template <class K>
struct Bimodule
{
    AlgebraPtr<K> left_alg;
    AlgebraPtr<K> right_alg;
    Index dim = 0;
    std::vector<Mat<K>> lact;
    /// m . b_j = ract[j] m.
    std::vector<Mat<K>> ract;

    Module<K> left_module() const { return Module<K>(left_alg, dim, lact, Side::left); }
    Module<K> right_module() const { return Module<K>(right_alg, dim, ract, Side::right); }
};

template <class K>
Diagnostics validate_bimodule(const Bimodule<K>& b);

template <class K>
Module<K> regular_module(const AlgebraPtr<K>& a, Side side = Side::left);
template <class K>
Module<K> zero_module(const AlgebraPtr<K>& a, Side side = Side::left);
template <class K>
Module<K> free_module(const AlgebraPtr<K>& a, Index rank);
/// A e for an idempotent e (left ideal generated by e).
template <class K>
Module<K> projective_module(const AlgebraPtr<K>& a, const Vec<K>& e);
/// N viewed as an A-module along f: A -> B.
template <class K>
Module<K> restrict_along(const AlgebraMorphism<K>& f, const Module<K>& n);

/// C as an (A, B)-bimodule through algebra maps f: A -> C and g: B -> C.
template <class K>
Bimodule<K> algebra_bimodule(const AlgebraMorphism<K>& f, const AlgebraMorphism<K>& g);
template <class K>
Bimodule<K> regular_bimodule(const AlgebraPtr<K>& a);

/// Hom space as a subspace of vectorised (rows x cols) matrices.
template <class K>
struct HomSpace
{
    Index rows = 0, cols = 0;
    Subspace<K> space;

    Index dim() const { return space.dim(); }
    Mat<K> element(Index k) const { return unvectorize<K>(space.basis().col(k), rows, cols); }
    std::vector<Mat<K>> basis() const;
    Vec<K> coords(const Mat<K>& f) const { return space.coords(Mat<K>(vectorize<K>(f))); }
    bool contains(const Mat<K>& f) const { return space.contains(Mat<K>(vectorize<K>(f))); }
    Mat<K> combine(const Vec<K>& c) const { return unvectorize<K>(space.basis() * c, rows, cols); }
};

template <class K>
HomSpace<K> hom_space(const Module<K>& m, const Module<K>& n);

/// Plain tensor product of the underlying spaces modulo the balancing
/// relations; plain index of e_i (x) f_j is i * right_dim + j.
template <class K>
struct Tensor
{
    Index left_dim = 0, right_dim = 0;
    Quotient<K> q;

    Index dim() const { return q.dim(); }
    /// Map induced on tensor classes by F (x) G, into `target`.
    Mat<K> induced(const Mat<K>& f, const Mat<K>& g, const Tensor& target) const;
    /// Class of x (x) y.
    Vec<K> pure(const Vec<K>& x, const Vec<K>& y) const;
};

/// M (x)_A N for a right A-module M and a left A-module N.
template <class K>
Tensor<K> tensor_space(const Module<K>& right, const Module<K>& left);

template <class K>
struct TensorModule
{
    Module<K> module;
    Tensor<K> t;
};

/// B (x)_A M as a left C-module for a (C, A)-bimodule B.
template <class K>
TensorModule<K> tensor(const Bimodule<K>& b, const Module<K>& m);

/// F (x) G between two tensor modules built with `tensor`.
template <class K>
Mat<K> tensor_map(const TensorModule<K>& src, const TensorModule<K>& dst, const Mat<K>& f, const Mat<K>& g);

template <class K>
struct Induced
{
    TensorModule<K> tm;
    /// m -> 1 (x) m.
    Mat<K> canonical;

    const Module<K>& module() const { return tm.module; }
};

/// B (x)_A M along f: A -> B.
template <class K>
Induced<K> induce(const AlgebraMorphism<K>& f, const Module<K>& m);

/// The B-linear extension B (x)_A M -> N, b (x) m -> b g(m), of an A-linear
/// g: M -> N|_A. Throws HardFailure when g is not balanced.
template <class K>
Mat<K> extend_along(const Induced<K>& ind, const Module<K>& n, const Mat<K>& g);

template <class K>
struct Dual
{
    Bimodule<K> bimodule;
    /// k-th basis functional as a (dim A2 x dim B) matrix.
    std::vector<Mat<K>> functionals;
};

/// Hom_{A2^op}(B, A2) for an (A1, A2)-bimodule B, as an (A2, A1)-bimodule
/// with (a2 f a1)(x) = a2 f(a1 x).
template <class K>
Dual<K> right_dual(const Bimodule<K>& b);

template <class K>
struct Evaluation
{
    Tensor<K> t;
    /// ev on tensor classes, into A2 coordinates.
    Mat<K> mat;
};

/// ev: B* (x)_{A1} B -> A2, f (x) x -> f(x); verified well defined and
/// A2-bilinear (throws HardFailure otherwise).
template <class K>
Evaluation<K> evaluation(const Dual<K>& dual, const Bimodule<K>& b);

template <class K>
struct SubModule
{
    Module<K> module;
    /// Columns: basis of the submodule in the ambient coordinates.
    Mat<K> inclusion;
};

template <class K>
struct QuotientModule
{
    Module<K> module;
    Mat<K> projection;
    Mat<K> section;
};

template <class K>
SubModule<K> submodule(const Module<K>& m, const Subspace<K>& v);
template <class K>
QuotientModule<K> quotient_module(const Module<K>& m, const Subspace<K>& v);
template <class K>
SubModule<K> kernel(const ModuleMorphism<K>& f);
template <class K>
SubModule<K> image(const ModuleMorphism<K>& f);
template <class K>
QuotientModule<K> cokernel(const ModuleMorphism<K>& f);

template <class K>
struct DirectSum
{
    Module<K> module;
    std::vector<Mat<K>> inclusions;
    std::vector<Mat<K>> projections;
};

template <class K>
DirectSum<K> direct_sum(const std::vector<Module<K>>& parts);

/// Submodule generated by the columns of `gens`.
template <class K>
Subspace<K> generated_submodule(const Module<K>& m, const Mat<K>& gens);

/// Basis vectors of M taken greedily until they generate M.
template <class K>
Mat<K> greedy_generators(const Module<K>& m);

template <class K>
struct FreeCover
{
    Module<K> free;
    /// F = A^g -> M, the j-th copy of A sent to A m_j.
    Mat<K> map;
    Mat<K> generators;
};

template <class K>
FreeCover<K> free_cover(const Module<K>& m, const Mat<K>& generators);

template <class K>
struct Projectivity
{
    bool projective = false;
    FreeCover<K> cover;
    /// Section M -> F with cover.map * section = id when projective.
    Mat<K> section;
};

template <class K>
Projectivity<K> is_projective(const Module<K>& m);

template <class K>
struct ProjectiveCover
{
    Module<K> projective;
    Mat<K> map;
    /// Idempotent index (into the algebra's list) of every indecomposable summand.
    std::vector<Index> summands;
    /// Multiplicity per isomorphism class of indecomposable projectives.
    std::vector<Index> multiplicity;
};

/// Needs radical and primitive idempotents on the algebra.
template <class K>
ProjectiveCover<K> projective_cover(const Module<K>& m);

/// rad(A) M.
template <class K>
Subspace<K> radical_submodule(const Module<K>& m);

template <class K>
struct Ext1
{
    Index dim = 0;
    /// Cocycle representatives, maps K -> N on the syzygy.
    std::vector<Mat<K>> cocycles;
    SubModule<K> syzygy;
};

/// Ext^1(M, N) from the presentation by the given generators of M (greedy
/// generators when empty).
template <class K>
Ext1<K> ext1(const Module<K>& m, const Module<K>& n, const std::optional<Mat<K>>& generators = std::nullopt);

template <class K>
bool pd_at_most(const Module<K>& m, int n);

enum class IsoVerdict { isomorphic, not_isomorphic, inconclusive };
std::string to_string(IsoVerdict v);

template <class K>
struct IsoResult
{
    IsoVerdict verdict = IsoVerdict::inconclusive;
    Mat<K> iso;
    std::string reason;

    bool found() const { return verdict == IsoVerdict::isomorphic; }
};

template <class K>
IsoResult<K> iso_test(const Module<K>& m, const Module<K>& n, std::uint64_t seed = 1);

} // namespace phl

#endif // PHL_MODREP_HPP
