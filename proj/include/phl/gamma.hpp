#ifndef PHL_GAMMA_HPP
#define PHL_GAMMA_HPP

#include <memory>

#include "phl/triples.hpp"

namespace phl {

/// Gamma = [[R2, R'*], [0, R1]] with R'* = Hom_{R2^op}(R', R2).
template <class K>
struct GammaRing
{
    PullbackData<K> data;
    /// R' as an (R1, R2)-bimodule through pi1 and pi2.
    Bimodule<K> rprime;
    Dual<K> dual;
    Evaluation<K> ev;
    /// Basis order R2, R'*, R1.
    AlgebraPtr<K> gamma;
    /// R' is f.g. projective as a right R2-module.
    bool rprime_projective = false;

    Index n2() const { return data.R2()->dim(); }
    Index nd() const { return dual.bimodule.dim; }
    Index n1() const { return data.R1()->dim(); }
    /// Block idempotents of Gamma.
    Vec<K> e2() const;
    Vec<K> e1() const;
};

template <class K>
using GammaRingPtr = std::shared_ptr<const GammaRing<K>>;

template <class K>
GammaRingPtr<K> gamma_ring(const PullbackData<K>& d);

/// Column vector (X2; X1) with structure morphism phi: R'* (x)_{R1} X1 -> X2.
template <class K>
struct GammaModule
{
    GammaRingPtr<K> ring;
    Module<K> x2, x1;
    /// R'* (x)_{R1} X1 as a left R2-module.
    TensorModule<K> dx1;
    /// On tensor classes.
    Mat<K> phi;
    /// Assembled Gamma-module on the basis (x2; x1).
    Module<K> module;

    Index dim() const { return module.dim(); }
};

/// phi_plain is given on the plain basis f_k (x) e_j, index k * dim X1 + j.
/// Throws HardFailure unless it is balanced and R2-linear.
template <class K>
GammaModule<K> make_gamma_module(const GammaRingPtr<K>& ring, const Module<K>& x2, const Module<K>& x1,
                                 const Mat<K>& phi_plain);

template <class K>
GammaModule<K> zero_gamma_module(const GammaRingPtr<K>& ring);

template <class K>
struct BlockForm
{
    GammaModule<K> g;
    /// g.module -> M, an isomorphism of Gamma-modules.
    Mat<K> to_module;
};

/// Block presentation of a Gamma-module through e2 M and e1 M.
template <class K>
BlockForm<K> block_form(const GammaRingPtr<K>& ring, const Module<K>& m);

template <class K>
struct GammaSum
{
    GammaModule<K> g;
    std::vector<Mat<K>> inclusions;
    std::vector<Mat<K>> projections;
};

template <class K>
GammaSum<K> gamma_sum(const GammaRingPtr<K>& ring, const std::vector<GammaModule<K>>& parts);

/// (f2; f1) as a matrix on the assembled modules.
template <class K>
Mat<K> block_map(const GammaModule<K>& s, const GammaModule<K>& t, const Mat<K>& f2, const Mat<K>& f1);

template <class K>
GammaModule<K> phi(const GammaRingPtr<K>& ring, const Triple<K>& t);

template <class K>
Mat<K> phi_map(const GammaModule<K>& s, const GammaModule<K>& t, const TripleMorphism<K>& m);

template <class K>
struct PhiInverse
{
    Triple<K> triple;
    /// Phi(triple) -> G; the identity on (X2; X1) when the round trip is exact.
    Mat<K> witness;
};

/// Refuses unless R' is f.g. projective over R2.
template <class K>
PhiInverse<K> phi_inverse(const GammaModule<K>& g);

template <class K>
struct TiltingModule
{
    /// (R2; R1) with psi, and (0; R1) with zero structure morphism.
    GammaModule<K> t0, t1;
    GammaSum<K> t;
};

/// zero_psi replaces psi by 0, giving the negative control.
template <class K>
TiltingModule<K> build_T(const GammaRingPtr<K>& ring, bool zero_psi = false);

/// The two short exact sequences through (0; R1).
template <class K>
Diagnostics verify_sequences(const GammaRingPtr<K>& ring);

/// pd <= 1, Ext^1(T, T) = 0 and Gamma in <T> with explicit witnesses.
template <class K>
Diagnostics verify_tilting(const GammaRingPtr<K>& ring, const TiltingModule<K>& t);

template <class K>
struct EndRing
{
    HomSpace<K> hom;
    /// End(M)^op on the Hom basis; nullptr for M = 0.
    AlgebraPtr<K> alg;
};

template <class K>
EndRing<K> end_algebra(const Module<K>& m);

template <class K>
struct GammaPrimeComparison
{
    Diagnostics diag;
    AlgebraPtr<K> gamma_prime;
    EndRing<K> end;
    /// Gamma' -> End(T)^op in Hom-basis coordinates.
    Mat<K> iso;
    /// R -> End((R2; R1))^op, r -> right multiplication.
    Mat<K> r_iso;
};

template <class K>
GammaPrimeComparison<K> compare_gamma_prime(const GammaRingPtr<K>& ring);

/// (R2; R1) as a (Gamma, R)-bimodule.
template <class K>
Bimodule<K> t0_bimodule(const GammaRingPtr<K>& ring);

/// Canonical (R2; R1) (x)_R M -> Phi(Ind M) on sampled M, with naturality.
template <class K>
Diagnostics check_phi_ind_tensor(const GammaRingPtr<K>& ring, const SampleOptions& options = {});

/// Phi on samples: round trips, functoriality, Hom dimensions, tensor lemma.
template <class K>
Check gamma_check(const PullbackData<K>& d, const SampleOptions& options = {});

/// Sequences, 1-tilting legs and the Gamma' comparison.
template <class K>
Check tilting_check(const PullbackData<K>& d);

} // namespace phl

#endif // PHL_GAMMA_HPP
