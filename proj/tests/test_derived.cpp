#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "phl/derived.hpp"

using namespace phl;
using fixtures::rows;
using namespace oracle;

namespace {

const Field<Rational> QQ{};
const Field<Fp> F2{2};
const Field<Fp> F3{3};

// R --r--> R in degrees -1, 0 for an element r of R.
template <class K>
Complex<K> two_term(const AlgebraPtr<K>& a, const Vec<K>& r)
{
    Module<K> m = regular_module(a);
    return Complex<K>(a, -1, {m, m}, {a->right_mult(r)});
}

template <class K>
Complex<K> contractible(const Module<K>& m, int lo)
{
    return Complex<K>(m.alg(), lo, {m, m}, {eye(m.field(), m.dim())});
}

// The element of R over E1/E3 whose R1-component is x (E1) or e2 (E3).
template <class K>
Vec<K> radical_element(const PullbackData<K>& d)
{
    const Field<K>& f = d.R()->field();
    const Mat<K>& i1 = d.i1.mat;
    for (Index k = 0; k < d.R()->dim(); ++k) {
        Vec<K> v = zeros(f, d.R()->dim(), 1);
        v(k) = f.one();
        Vec<K> img = i1 * v;
        if (!(img(0) == f.zero()) || is_zero<K>(Mat<K>(img)))
            continue;
        return v;
    }
    return zeros(f, d.R()->dim(), 1);
}

// T2 = upper triangular 2x2 matrices, basis E11, E12, E22.
template <class K>
AlgebraPtr<K> upper_triangular(const Field<K>& f)
{
    std::vector<Mat<K>> left{rows(f, {{1, 0, 0}, {0, 1, 0}, {0, 0, 0}}), rows(f, {{0, 0, 0}, {0, 0, 1}, {0, 0, 0}}),
                             rows(f, {{0, 0, 0}, {0, 0, 0}, {0, 0, 1}})};
    return make_algebra<K>(f, {"E11", "E12", "E22"}, left, Vec<K>(rows(f, {{1}, {0}, {1}})));
}

// M2(k) <- M2(k) (identity) and T2 -> M2(k) (inclusion).
template <class K>
PullbackData<K> triangular_in_matrices(const Field<K>& f)
{
    auto m2 = matrix_algebra(f, 2);
    auto t2 = upper_triangular(f);
    AlgebraMorphism<K> pi1{m2, m2, eye(f, 4), "pi1"};
    AlgebraMorphism<K> pi2{t2, m2, rows(f, {{1, 0, 0}, {0, 1, 0}, {0, 0, 0}, {0, 0, 1}}), "pi2"};
    return pullback(pi1, pi2);
}

// Brute count over F2 of module-map pairs compatible with the gluing maps.
std::size_t brute_stalk_pairs(const Triple<Fp>& s, const Triple<Fp>& t)
{
    auto h1 = brute_homs(s.x1, t.x1);
    auto h2 = brute_homs(s.x2, t.x2);
    std::size_t count = 0;
    for (const auto& a : h1)
        for (const auto& b : h2) {
            Mat<Fp> fa(t.x1.dim(), s.x1.dim()), fb(t.x2.dim(), s.x2.dim());
            for (Index i = 0; i < fa.rows(); ++i)
                for (Index j = 0; j < fa.cols(); ++j)
                    fa(i, j) = F2.from_int(a[i][j]);
            for (Index i = 0; i < fb.rows(); ++i)
                for (Index j = 0; j < fb.cols(); ++j)
                    fb(i, j) = F2.from_int(b[i][j]);
            if (Mat<Fp>(t.c * leg1_push(s, t, fa)) == Mat<Fp>(leg2_push(s, t, fb) * s.c))
                ++count;
        }
    return count;
}

} // namespace

TEST(IndL, StalkMatchesUnderivedInd)
{
    for (auto d : {fixtures::e1(QQ), fixtures::e3(QQ)}) {
        Module<Rational> r = regular_module(d.R());
        DIndResult<Rational> di = ind_L(d, stalk(r));
        IndResult<Rational> u = ind(d, r);
        EXPECT_EQ(di.leg1.cx.dim(0), u.leg1.module().dim());
        EXPECT_EQ(di.leg2.cx.dim(0), u.leg2.module().dim());
        EXPECT_EQ(di.triple.c.at(0), u.triple.c);
        EXPECT_TRUE(is_gluing(di.triple));
    }
}

TEST(IndL, ZeroAndContractible)
{
    auto d = fixtures::e1(QQ);
    DIndResult<Rational> z = ind_L(d, zero_complex(d.R()));
    EXPECT_EQ(z.triple.p1.total_dim(), 0);
    EXPECT_EQ(dtr_hom(z.triple, z.triple).dim(), 0);
    DIndResult<Rational> c = ind_L(d, contractible(regular_module(d.R()), 0));
    EXPECT_EQ(homotopy_hom(c.leg1.cx, c.leg1.cx).dim(), 0);
    EXPECT_EQ(homotopy_hom(c.leg2.cx, c.leg2.cx).dim(), 0);
}

TEST(IndL, RefusesNonProjectiveTerms)
{
    auto d = fixtures::e1(QQ);
    // R / rad R is the simple module, not projective over k[x]/(x^2).
    Module<Rational> r = regular_module(d.R());
    Module<Rational> s = quotient_module(r, radical_submodule(r)).module;
    EXPECT_THROW(ind_L(d, stalk(s)), HypothesisRefused);
}

TEST(IndL, MapsAreStrictAndCompose)
{
    auto d = fixtures::e1(QQ);
    Complex<Rational> p = two_term(d.R(), radical_element(d));
    DIndResult<Rational> ip = ind_L(d, p);
    HomotopyHom<Rational> h = homotopy_hom(p, p);
    ASSERT_GT(h.dim(), 0);
    ChainMap<Rational> g = h.element(0);
    DTrMorphism<Rational> m = ind_L_map(ip, ip, g);
    DTrMorphism<Rational> mm = compose(ip.triple, ip.triple, ip.triple, m, m);
    EXPECT_TRUE(is_dtr_morphism(ip.triple, ip.triple, mm));
    EXPECT_EQ(mm.f1, induce_chain_map(ip.leg1, ip.leg1, compose(g, g)));
}

TEST(DtrHom, StalkRegularHasDimR)
{
    for (auto d : {fixtures::e1(QQ), fixtures::e3(QQ), fixtures::e4(QQ)}) {
        DIndResult<Rational> ip = ind_L(d, stalk(regular_module(d.R())));
        EXPECT_EQ(dtr_hom(ip.triple, ip.triple).dim(), d.R()->dim());
    }
    auto d = fixtures::e1(QQ);
    DIndResult<Rational> ip = ind_L(d, stalk(regular_module(d.R())));
    EXPECT_EQ(dtr_hom(ip.triple, ip.triple).dim(), 2);
}

TEST(DtrHom, StalksReduceToTripleHom)
{
    auto d = fixtures::e1(F2);
    std::mt19937_64 rng(4);
    std::vector<Module<Fp>> ms{regular_module(d.R()), free_module(d.R(), 2)};
    for (int k = 0; k < 3; ++k)
        ms.push_back(random_module(d.R(), rng, 3));
    for (const auto& a : ms)
        for (const auto& b : ms) {
            if (!is_projective(a).projective || !is_projective(b).projective)
                continue;
            DIndResult<Fp> ia = ind_L(d, stalk(a)), ib = ind_L(d, stalk(b));
            const Index dim = dtr_hom(ia.triple, ib.triple).dim();
            Triple<Fp> ta = ind(d, a).triple, tb = ind(d, b).triple;
            EXPECT_EQ(dim, triple_hom(ta, tb).dim());
            EXPECT_EQ(dim, log_p(brute_stalk_pairs(ta, tb), 2));
        }
}

TEST(DtrHom, BasisCarriesVerifiedWitnesses)
{
    auto d = fixtures::e1(QQ);
    DIndResult<Rational> ip = ind_L(d, two_term(d.R(), radical_element(d)));
    DtrHom<Rational> h = dtr_hom(ip.triple, ip.triple);
    for (const auto& m : h.basis())
        EXPECT_TRUE(is_dtr_morphism(ip.triple, ip.triple, m));
}

TEST(DtrHom, E1ComplexesMatchHomK)
{
    // Over E1 and E3 R -> R1 is an isomorphism and pi2 = id, so a morphism of
    // induced derived triples is determined by its first leg.
    for (auto d : {fixtures::e1(F3), fixtures::e3(F3)}) {
        std::mt19937_64 rng(11);
        std::vector<Complex<Fp>> xs{stalk(regular_module(d.R())), two_term(d.R(), radical_element(d))};
        for (int k = 0; k < 2; ++k)
            xs.push_back(random_projective_complex(d.R(), rng, {3, 4}));
        std::vector<DIndResult<Fp>> is;
        for (const auto& x : xs)
            is.push_back(ind_L(d, x));
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::size_t j = 0; j < xs.size(); ++j) {
                EXPECT_EQ(dtr_hom(is[i].triple, is[j].triple).dim(), homotopy_hom(xs[i], xs[j]).dim());
                EXPECT_TRUE(kernel_basis(is[i], is[j]).elements.empty());
            }
    }
}

TEST(Fullness, PreimageOfInducedMap)
{
    auto d = fixtures::e1(QQ);
    Complex<Rational> p = two_term(d.R(), radical_element(d));
    DIndResult<Rational> ip = ind_L(d, p);
    HomotopyHom<Rational> h = homotopy_hom(p, p);
    for (const auto& g0 : h.basis()) {
        Preimage<Rational> w = fullness_witness(ip, ip, ind_L_map(ip, ip, g0));
        EXPECT_TRUE(is_homotopy(induce_chain_map(ip.leg1, ip.leg1, w.g), induce_chain_map(ip.leg1, ip.leg1, g0),
                                w.h1));
    }
    DTrMorphism<Rational> zero{zero_map(ip.leg1.cx, ip.leg1.cx), zero_map(ip.leg2.cx, ip.leg2.cx),
                               zero_homotopy(ip.triple.ind1.cx, ip.triple.ind2.cx)};
    Preimage<Rational> w = fullness_witness(ip, ip, zero);
    EXPECT_TRUE(null_homotopy_witness(induce_chain_map(ip.leg1, ip.leg1, w.g)).has_value());
}

TEST(Fullness, EveryBasisElementOnE4)
{
    auto d = fixtures::e4(QQ);
    std::mt19937_64 rng(2);
    std::vector<Complex<Rational>> xs{stalk(regular_module(d.R())), two_term(d.R(), d.R()->basis_vector(1))};
    xs.push_back(random_projective_complex(d.R(), rng, {3, 4}));
    for (const auto& x : xs)
        for (const auto& y : xs) {
            DIndResult<Rational> ix = ind_L(d, x), iy = ind_L(d, y);
            DtrHom<Rational> h = dtr_hom(ix.triple, iy.triple);
            KernelBasis<Rational> kb = kernel_basis(ix, iy);
            EXPECT_EQ(h.dim() + static_cast<Index>(kb.elements.size()), kb.hom.dim());
            for (const auto& m : h.basis())
                EXPECT_NO_THROW(fullness_witness(ix, iy, m));
        }
}

TEST(Kernel, ZeroOnStalksAndContractibles)
{
    auto d = fixtures::e4(QQ);
    DIndResult<Rational> s = ind_L(d, stalk(regular_module(d.R())));
    EXPECT_TRUE(kernel_basis(s, s).elements.empty());
    DIndResult<Rational> c = ind_L(d, contractible(regular_module(d.R()), -1));
    KernelBasis<Rational> kb = kernel_basis(c, c);
    EXPECT_EQ(kb.hom.dim(), 0);
    EXPECT_TRUE(kb.elements.empty());
}

TEST(SquareZero, StalksAndSamples)
{
    auto d = fixtures::e4(QQ);
    std::mt19937_64 rng(3);
    std::vector<Complex<Rational>> xs{stalk(regular_module(d.R())), two_term(d.R(), d.R()->basis_vector(1))};
    for (int k = 0; k < 2; ++k)
        xs.push_back(random_projective_complex(d.R(), rng, {3, 4}));
    EXPECT_TRUE(square_zero_check(d, xs).ok());
}

TEST(DetectsIso, IdentityKernelShiftsAndZero)
{
    auto d = fixtures::e1(QQ);
    std::mt19937_64 rng(5);
    std::vector<Complex<Rational>> xs{stalk(regular_module(d.R())), two_term(d.R(), radical_element(d))};
    Diagnostics diag = detects_iso_check(d, xs, rng);
    EXPECT_TRUE(diag.ok()) << diag.first();
    // The zero endomorphism of stalk R has non-invertible homology action.
    DIndResult<Rational> s = ind_L(d, xs[0]);
    EXPECT_FALSE(homotopy_inverse(induce_chain_map(s.leg1, s.leg1, zero_map(xs[0], xs[0]))).has_value());
}

TEST(RadicalCondition, Examples)
{
    EXPECT_TRUE(radical_condition_check(fixtures::e1(QQ)));
    EXPECT_TRUE(radical_condition_check(fixtures::e3(QQ)));
    EXPECT_TRUE(radical_condition_check(fixtures::e4(QQ)));
    auto bad = triangular_in_matrices(QQ);
    Diagnostics diag = radical_condition(bad);
    EXPECT_FALSE(diag.ok());
    EXPECT_EQ(diag.first(), "pi2(rad R2) is not contained in rad R'");
}

TEST(Density, RoundTripOnInduced)
{
    auto d = fixtures::e1(QQ);
    Complex<Rational> p = complex_sum(two_term(d.R(), radical_element(d)), contractible(regular_module(d.R()), -1));
    DIndResult<Rational> ip = ind_L(d, p);
    DensityLift<Rational> lift = density_lift(ip.triple);
    EXPECT_TRUE(lift.diag.ok());
    EXPECT_TRUE(is_minimal(lift.m1.q));
    EXPECT_TRUE(is_chain_iso(lift.c_min));
    // The contractible summand is stripped: P' is R --x--> R.
    EXPECT_EQ(lift.p.total_dim(), 4);
    Preimage<Rational> w = fullness_witness(lift.ind, ip, lift.iso);
    EXPECT_TRUE(homotopy_inverse(w.g).has_value());
}

TEST(Density, HandBuiltTwist)
{
    auto d = fixtures::e1(QQ);
    Complex<Rational> p = two_term(d.R(), radical_element(d));
    DIndResult<Rational> ip = ind_L(d, p);
    const DerivedTriple<Rational>& t = ip.triple;
    // R' (x) P2 has zero differential; scale the two degrees differently.
    ChainMap<Rational> twist = chain_map(t.ind2.cx, t.ind2.cx, [&](int n) {
        return Mat<Rational>(QQ.from_int(n == 0 ? 2 : 3) * eye(QQ, t.ind2.cx.dim(n)));
    });
    ASSERT_TRUE(is_chain_map(twist));
    DerivedTriple<Rational> tw = make_derived_triple(d, t.p1, t.p2, compose(twist, t.c));
    ASSERT_TRUE(is_gluing(tw));
    DensityLift<Rational> lift = density_lift(tw);
    EXPECT_TRUE(is_dtr_morphism(lift.ind.triple, tw, lift.iso));
    EXPECT_EQ(lift.p.dim(-1), 2);
    EXPECT_EQ(lift.p.dim(0), 2);
    // Homology of P' matches P: one copy of k in each degree.
    for (int n : {-1, 0})
        EXPECT_EQ(homology(lift.p, n).module().dim(), homology(p, n).module().dim());
}

TEST(Density, RandomTwistsOnE3)
{
    auto d = fixtures::e3(F3);
    std::mt19937_64 rng(8);
    for (int k = 0; k < 3; ++k) {
        DerivedTriple<Fp> t = random_twisted_triple(d, rng, {3, 4});
        ASSERT_TRUE(is_gluing(t));
        DensityLift<Fp> lift = density_lift(t);
        EXPECT_TRUE(is_dtr_morphism(lift.ind.triple, t, lift.iso));
    }
}

TEST(Density, RefusesWithoutSurjectivity)
{
    auto d = fixtures::e2(QQ);
    DerivedTriple<Rational> z = zero_derived_triple(d);
    try {
        density_lift(z);
        FAIL() << "expected a refusal";
    } catch (const HypothesisRefused& e) {
        EXPECT_EQ(std::string(e.what()), "pi1 is not surjective");
    }
}

TEST(Dphi, StalkRegularIsPhiOfInd)
{
    auto d = fixtures::e1(QQ);
    auto ring = gamma_ring(d);
    Module<Rational> r = regular_module(d.R());
    CommaObject<Rational> c = dphi(ring, ind_L(d, stalk(r)).triple);
    GammaModule<Rational> g = phi(ring, ind(d, r).triple);
    EXPECT_EQ(c.phi.at(0), g.phi);
    CommaObject<Rational> z = dphi(ring, zero_derived_triple(d));
    EXPECT_EQ(z.x1.total_dim() + z.x2.total_dim(), 0);
}

TEST(Dphi, HomDimensionsAgree)
{
    auto d = fixtures::e1(QQ);
    auto ring = gamma_ring(d);
    std::mt19937_64 rng(6);
    std::vector<DerivedTriple<Rational>> ts{ind_L(d, stalk(regular_module(d.R()))).triple};
    for (int k = 0; k < 2; ++k)
        ts.push_back(random_twisted_triple(d, rng, {3, 4}));
    for (const auto& s : ts)
        for (const auto& t : ts) {
            Diagnostics diag = dphi_hom_check(ring, s, t);
            EXPECT_TRUE(diag.ok()) << diag.first();
        }
}

TEST(PsiView, StalkT0AndZero)
{
    auto d = fixtures::e1(QQ);
    auto ring = gamma_ring(d);
    TiltingModule<Rational> t = build_T(ring);
    GammaComplex<Rational> g{ring, 0, {t.t0}, {}};
    CommaObject<Rational> c = psi_view(g);
    EXPECT_EQ(c.x1.dim(0), d.R1()->dim());
    EXPECT_EQ(c.x2.dim(0), d.R2()->dim());
    EXPECT_EQ(c.phi.at(0), t.t0.phi);
    CommaObject<Rational> z = psi_view(GammaComplex<Rational>{ring, 0, {}, {}});
    EXPECT_EQ(z.x1.total_dim(), 0);
}

TEST(CorFF, StalkRegularAndSamples)
{
    auto d = fixtures::e1(QQ);
    auto ring = gamma_ring(d);
    Complex<Rational> s = stalk(regular_module(d.R()));
    Bimodule<Rational> b = t0_bimodule(ring);
    TensorComplex<Rational> ts = tensor_complex(b, s);
    EXPECT_EQ(homotopy_hom(ts.cx, ts.cx).dim(), 2);
    std::mt19937_64 rng(9);
    std::vector<Complex<Rational>> xs{s, zero_complex(d.R()), random_projective_complex(d.R(), rng, {3, 4})};
    Diagnostics diag = cor_ff_check(ring, xs);
    EXPECT_TRUE(diag.ok()) << diag.first();
}

TEST(Generators, RandomComplexesAreProjectiveAndBounded)
{
    auto d = fixtures::e4(F2);
    std::mt19937_64 rng(10);
    for (int k = 0; k < 6; ++k) {
        Complex<Fp> x = random_projective_complex(d.R(), rng, {4, 6});
        EXPECT_TRUE(is_projective_complex(x));
        EXPECT_LE(static_cast<int>(x.terms().size()), 4);
        for (int n = x.lo(); n <= x.hi(); ++n)
            EXPECT_LE(x.dim(n), 6);
    }
}

TEST(Suite, E2RefusesAndRunsCounterexample)
{
    auto checks = epivalence_suite(fixtures::e2(QQ));
    ASSERT_EQ(checks.size(), 2u);
    EXPECT_EQ(checks[0].status, Status::refused);
    EXPECT_EQ(checks[0].lines.back(), "refused: pi1 is not surjective");
    EXPECT_EQ(checks[1].status, Status::pass);
}

TEST(Suite, E1AndE3Pass)
{
    SuiteOptions o;
    o.seeds = 2;
    for (auto d : {fixtures::e1(F3), fixtures::e3(F3)}) {
        for (auto& c : epivalence_suite(d, o)) {
            EXPECT_TRUE(c.passed()) << c.id << ": " << (c.lines.empty() ? "" : c.lines.back());
            for (auto& cert : c.certificates)
                EXPECT_TRUE(cert()) << c.id;
        }
    }
}
