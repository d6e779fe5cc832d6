#ifndef PHL_TRIPLES_HPP
#define PHL_TRIPLES_HPP

#include <random>

#include "phl/modrep.hpp"
#include "phl/report.hpp"

namespace phl {

/// (X1, X2; c) with c: R' (x)_{R1} X1 -> R' (x)_{R2} X2 an R'-map. The two
/// inductions are kept alongside so morphisms can be pushed to R'.
template <class K>
struct Triple
{
    PullbackData<K> data;
    Module<K> x1, x2;
    Induced<K> ind1, ind2;
    Mat<K> c;
};

/// Throws InputError unless c is an R'-morphism of the right shape.
template <class K>
Triple<K> make_triple(const PullbackData<K>& d, const Module<K>& x1, const Module<K>& x2, const Mat<K>& c);

template <class K>
Triple<K> zero_triple(const PullbackData<K>& d);

template <class K>
struct TripleMorphism
{
    Mat<K> f1, f2;
};

/// R' (x) f1 between the first legs.
template <class K>
Mat<K> leg1_push(const Triple<K>& s, const Triple<K>& t, const Mat<K>& f1);
template <class K>
Mat<K> leg2_push(const Triple<K>& s, const Triple<K>& t, const Mat<K>& f2);

template <class K>
bool is_triple_morphism(const Triple<K>& s, const Triple<K>& t, const TripleMorphism<K>& m);

template <class K>
TripleMorphism<K> compose(const TripleMorphism<K>& g, const TripleMorphism<K>& f)
{
    return {g.f1 * f.f1, g.f2 * f.f2};
}

template <class K>
bool is_gluing(const Triple<K>& t);

/// Ind(M) together with the legs R_i (x)_R M as induced modules.
template <class K>
struct IndResult
{
    Module<K> m;
    Induced<K> leg1, leg2;
    Triple<K> triple;
};

template <class K>
IndResult<K> ind(const PullbackData<K>& d, const Module<K>& m);

/// (R1 (x) g, R2 (x) g).
template <class K>
TripleMorphism<K> ind_map(const IndResult<K>& s, const IndResult<K>& t, const Mat<K>& g);

template <class K>
struct PbResult
{
    /// X1 (+) X2 restricted to R.
    Module<K> ambient;
    SubModule<K> sub;
    Mat<K> p1, p2;

    const Module<K>& module() const { return sub.module; }
};

template <class K>
PbResult<K> pb(const Triple<K>& t);

template <class K>
Mat<K> pb_map(const PbResult<K>& s, const PbResult<K>& t, const TripleMorphism<K>& m);

template <class K>
struct Unit
{
    IndResult<K> ind;
    PbResult<K> pb;
    Mat<K> eta;
};

/// eta_M: M -> Pb Ind M, m -> (1 (x) m, 1 (x) m).
template <class K>
Unit<K> unit(const PullbackData<K>& d, const Module<K>& m);

template <class K>
struct Counit
{
    PbResult<K> pb;
    IndResult<K> ind;
    TripleMorphism<K> eps;
};

/// eps_T: Ind Pb T -> T, 1 (x) (x1, x2) -> x_i.
template <class K>
Counit<K> counit(const Triple<K>& t);

template <class K>
bool is_separated(const PullbackData<K>& d, const Module<K>& m);

/// Hom in the category of triples, parametrised by pairs of Hom bases.
template <class K>
struct TripleHom
{
    HomSpace<K> h1, h2;
    /// Coefficients (a, b) over h1 (+) h2 satisfying the compatibility.
    Subspace<K> space;

    Index dim() const { return space.dim(); }
    TripleMorphism<K> element(Index k) const;
    std::vector<TripleMorphism<K>> basis() const;
    bool contains(const TripleMorphism<K>& m) const;
    Vec<K> coords(const TripleMorphism<K>& m) const;
};

template <class K>
TripleHom<K> triple_hom(const Triple<K>& s, const Triple<K>& t);

template <class K>
struct TripleIso
{
    IsoVerdict verdict = IsoVerdict::inconclusive;
    TripleMorphism<K> iso;
    std::string reason;

    bool found() const { return verdict == IsoVerdict::isomorphic; }
};

/// Joint search for an invertible (f1, f2) in the triple Hom space.
template <class K>
TripleIso<K> triple_iso(const Triple<K>& s, const Triple<K>& t, std::uint64_t seed = 1);

/// Bijection Hom_R(M, Pb T) -> Hom_Tr(Ind M, T) and both triangle identities.
template <class K>
Diagnostics adjunction_check(const PullbackData<K>& d, const Module<K>& m, const Triple<K>& t);

/// Exactness of M -> (R1 (x) M) (+) (R2 (x) M) -> R' (x) M -> 0 at the two
/// right positions, and of 0 -> R -> R1 (+) R2 -> R' -> 0.
template <class K>
Diagnostics verify_sequence_M(const PullbackData<K>& d, const Module<K>& m);

/// Counit invertibility for a gluing triple under the superfluousness
/// certificate, with p1(IM) = I1 p1(M). Notes a skip when the certificate
/// is unknown.
template <class K>
Diagnostics counit_iso_gluing_check(const Triple<K>& t);

/// f.g. projective R-module with the given multiplicities of A e_c.
template <class K>
Module<K> projective_sum(const AlgebraPtr<K>& a, const std::vector<Index>& multiplicity);

/// Multiplicity vector of a projective module, with an isomorphism from the
/// standard sum; nullopt when M is not projective.
template <class K>
struct ProjectiveClass
{
    std::vector<Index> multiplicity;
    /// projective_sum(multiplicity) -> M.
    Mat<K> iso;
};

template <class K>
std::optional<ProjectiveClass<K>> classify_projective(const Module<K>& m);

/// All multiplicity vectors with total dimension at most `bound`.
template <class K>
std::vector<std::vector<Index>> projective_classes(const AlgebraPtr<K>& a, Index bound);

struct MilnorOptions
{
    Index dim_bound = 4;
    std::uint64_t seed = 1;
    int samples = 3;
    std::uint64_t ceiling = std::uint64_t(1) << 20;
};

/// Ind on f.g. projectives versus gluing projective triples: exhaustive
/// orbit count over F_p below the ceiling, sampled otherwise.
template <class K>
Check milnor_check(const PullbackData<K>& d, const MilnorOptions& options = {});

/// Random f.g. module: a quotient of a small free module by random elements.
template <class K>
Module<K> random_module(const AlgebraPtr<K>& a, std::mt19937_64& rng, Index max_dim);

/// Random separated module: a submodule of X1 (+) X2 generated by random elements.
template <class K>
Module<K> random_separated(const PullbackData<K>& d, std::mt19937_64& rng, Index max_dim);

/// Random gluing triple (X1, X2; c), or nullopt when the drawn legs admit none.
template <class K>
std::optional<Triple<K>> random_gluing_triple(const PullbackData<K>& d, std::mt19937_64& rng, Index max_dim);

struct SampleOptions
{
    int samples = 6;
    std::uint64_t seed = 1;
    Index max_dim = 4;
};

/// Adjunction, unit, counit and exact-sequence checks over sampled objects.
template <class K>
Check lemma_suite(const PullbackData<K>& d, const SampleOptions& options = {});

/// Separated modules versus gluing triples on samples.
template <class K>
Check separated_equiv_check(const PullbackData<K>& d, const SampleOptions& options = {});

/// E2-style demonstration: the gluing triple (R1, R2; 1 + t) with zero Pb.
template <class K>
Check counterexample_check(const PullbackData<K>& d, const Vec<K>& twist);

} // namespace phl

#endif // PHL_TRIPLES_HPP
