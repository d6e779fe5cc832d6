#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "phl/modrep.hpp"

using namespace phl;
using fixtures::rows;
using namespace oracle;

namespace {

const Field<Rational> QQ{};
const Field<Fp> F2{2};
const Field<Fp> F3{3};

template <class K>
Module<K> simple_top(const AlgebraPtr<K>& a)
{
    Module<K> reg = regular_module(a);
    return quotient_module(reg, radical_submodule(reg)).module;
}

// Left regular module of k[x]/(x^2) in the basis (x, 1).
template <class K>
Module<K> permuted_regular(const AlgebraPtr<K>& a)
{
    const Field<K>& f = a->field();
    Mat<K> p = rows(f, {{0, 1}, {1, 0}});
    std::vector<Mat<K>> act;
    for (Index i = 0; i < a->dim(); ++i)
        act.push_back(p * a->left(i) * p);
    return make_module(a, 2, act);
}

} // namespace

TEST(Module, RegularAndSimpleValidate)
{
    auto a = truncated_polynomial(QQ, 2);
    EXPECT_TRUE(validate_module(regular_module(a)).ok());
    EXPECT_TRUE(validate_module(regular_module(a, Side::right)).ok());
    EXPECT_TRUE(validate_module(simple_top(a)).ok());
}

TEST(Module, BrokenActionRejected)
{
    auto a = truncated_polynomial(QQ, 2);
    std::vector<Mat<Rational>> act{rows(QQ, {{1}}), rows(QQ, {{1}})};
    EXPECT_THROW(make_module(a, 1, act), InputError);
}

TEST(Hom, FieldOverItself)
{
    auto k = diagonal_algebra(QQ, 1);
    EXPECT_EQ(hom_space(regular_module(k), regular_module(k)).dim(), 1);
}

TEST(Hom, DualNumbersToSimple)
{
    auto a = truncated_polynomial(QQ, 2);
    HomSpace<Rational> h = hom_space(regular_module(a), simple_top(a));
    EXPECT_EQ(h.dim(), 1);
    // The map is evaluation at 0: it kills x.
    EXPECT_EQ(h.element(0)(0, 1), Rational(0));

    for (const Field<Fp>& f : {F2, F3}) {
        auto af = truncated_polynomial(f, 2);
        Module<Fp> m = regular_module(af), n = simple_top(af);
        EXPECT_EQ(hom_space(m, n).dim(), log_p(brute_homs(m, n).size(), f.p()));
    }
}

TEST(Hom, IntoZero)
{
    auto a = truncated_polynomial(QQ, 2);
    EXPECT_EQ(hom_space(regular_module(a), zero_module(a)).dim(), 0);
}

TEST(Hom, MatchesBruteForceOnSamples)
{
    auto a = truncated_polynomial(F2, 3);
    auto g = fixtures::e4(F2);
    std::vector<Module<Fp>> ms{regular_module(a), simple_top(a),
                               quotient_module(regular_module(a),
                                               Subspace<Fp>::span(rows(F2, {{0}, {0}, {1}}), 3))
                                   .module};
    for (const auto& m : ms)
        for (const auto& n : ms)
            EXPECT_EQ(hom_space(m, n).dim(), log_p(brute_homs(m, n).size(), 2));
}

TEST(Hom, AlgebraMismatchThrows)
{
    auto a = truncated_polynomial(QQ, 2);
    auto b = truncated_polynomial(QQ, 2);
    EXPECT_THROW(hom_space(regular_module(a), regular_module(b)), InputError);
}

TEST(Tensor, FieldOverItself)
{
    auto k = diagonal_algebra(QQ, 1);
    EXPECT_EQ(tensor_space(regular_module(k, Side::right), regular_module(k)).dim(), 1);
}

TEST(Tensor, E1CornerOverR1)
{
    for (const Field<Fp>& f : {F2}) {
        auto d = fixtures::e1(f);
        Bimodule<Fp> rp = algebra_bimodule(identity_morphism(d.Rp()), d.pi1);
        Module<Fp> right = rp.right_module();
        // R' (x)_{R1} R1
        EXPECT_EQ(tensor_space(right, regular_module(d.R1())).dim(), 1);
        // R' (x)_{R1} k, x acting by 0.
        Module<Fp> simple = simple_top(d.R1());
        Tensor<Fp> t = tensor_space(right, simple);
        EXPECT_EQ(t.dim(), brute_tensor_dim_f2(right, simple));
        EXPECT_EQ(t.dim(), 1);
    }
    auto d = fixtures::e1(QQ);
    Bimodule<Rational> rp = algebra_bimodule(identity_morphism(d.Rp()), d.pi1);
    EXPECT_EQ(tensor_space(rp.right_module(), simple_top(d.R1())).dim(), 1);
}

TEST(Tensor, RelationsAnnihilatedAndBasisIndependent)
{
    auto a = truncated_polynomial(F2, 2);
    Module<Fp> right = regular_module(a, Side::right);
    Module<Fp> left = regular_module(a), perm = permuted_regular(a);
    Tensor<Fp> t1 = tensor_space(right, left), t2 = tensor_space(right, perm);
    EXPECT_EQ(t1.dim(), t2.dim());
    EXPECT_EQ(t1.dim(), brute_tensor_dim_f2(right, left));
    EXPECT_TRUE(is_zero<Fp>(Mat<Fp>(t1.q.project() * t1.q.relations().basis())));
}

TEST(Tensor, SideMismatchThrows)
{
    auto a = truncated_polynomial(QQ, 2);
    EXPECT_THROW(tensor_space(regular_module(a), regular_module(a)), InputError);
}

TEST(Induce, AlongIdentity)
{
    auto a = truncated_polynomial(QQ, 2);
    Module<Rational> m = simple_top(a);
    Induced<Rational> ind = induce(identity_morphism(a), m);
    EXPECT_EQ(ind.module().dim(), 1);
    EXPECT_EQ(iso_test(ind.module(), m).verdict, IsoVerdict::isomorphic);
    EXPECT_TRUE(is_morphism(m, ind.module(), ind.canonical));
}

TEST(Induce, E1FreeAndCorner)
{
    auto d = fixtures::e1(QQ);
    Induced<Rational> r1 = induce(d.i1, regular_module(d.R()));
    EXPECT_EQ(r1.module().dim(), 2);
    EXPECT_EQ(iso_test(r1.module(), regular_module(d.R1())).verdict, IsoVerdict::isomorphic);

    // R2 (x)_R R1 with R1 an R-module through i1.
    Module<Rational> r1_over_r = restrict_along(d.i1, regular_module(d.R1()));
    EXPECT_EQ(induce(d.i2, r1_over_r).module().dim(), 1);

    auto df = fixtures::e1(F2);
    Module<Fp> m = restrict_along(df.i1, regular_module(df.R1()));
    Induced<Fp> ind = induce(df.i2, m);
    Bimodule<Fp> b = algebra_bimodule(identity_morphism(df.R2()), df.i2);
    EXPECT_EQ(ind.module().dim(), brute_tensor_dim_f2(b.right_module(), m));
}

TEST(Induce, CanonicalMapIsLinearAlongPhi)
{
    auto d = fixtures::e4(QQ);
    Module<Rational> m = regular_module(d.R());
    Induced<Rational> ind = induce(d.i1, m);
    Module<Rational> back = restrict_along(d.i1, ind.module());
    EXPECT_TRUE(is_morphism(m, back, ind.canonical));
}

TEST(Dual, E1Corner)
{
    auto d = fixtures::e1(QQ);
    Bimodule<Rational> rp = algebra_bimodule(d.pi1, d.pi2);
    ASSERT_TRUE(validate_bimodule(rp).ok());
    Dual<Rational> dual = right_dual(rp);
    EXPECT_EQ(dual.bimodule.dim, 1);
    // x in R1 acts through pi1, hence by 0.
    EXPECT_EQ(dual.bimodule.ract[1], rows(QQ, {{0}}));
    EXPECT_EQ(dual.bimodule.ract[0], rows(QQ, {{1}}));
}

TEST(Dual, FieldAndZero)
{
    auto k = diagonal_algebra(QQ, 1);
    EXPECT_EQ(right_dual(regular_bimodule(k)).bimodule.dim, 1);
    Bimodule<Rational> zero{k, k, 0, {Mat<Rational>(0, 0)}, {Mat<Rational>(0, 0)}};
    EXPECT_EQ(right_dual(zero).bimodule.dim, 0);
}

TEST(Dual, EvaluationE1)
{
    auto d = fixtures::e1(QQ);
    Bimodule<Rational> rp = algebra_bimodule(d.pi1, d.pi2);
    Dual<Rational> dual = right_dual(rp);
    Evaluation<Rational> ev = evaluation(dual, rp);
    ASSERT_EQ(ev.t.dim(), 1);
    // ev(f (x) 1) = f(1), read straight off the functional.
    Vec<Rational> gen = ev.t.pure(Vec<Rational>::Constant(1, Rational(1)), Vec<Rational>::Constant(1, Rational(1)));
    Vec<Rational> val = ev.mat * gen;
    EXPECT_EQ(val(0), dual.functionals[0](0, 0));
    EXPECT_NE(val(0), Rational(0));
}

TEST(Dual, EvaluationReproducesFunctionals)
{
    auto a = truncated_polynomial(F2, 2);
    Bimodule<Fp> b = regular_bimodule(a);
    Dual<Fp> dual = right_dual(b);
    ASSERT_EQ(dual.bimodule.dim, 2);
    Evaluation<Fp> ev = evaluation(dual, b);
    for (Index i = 0; i < dual.bimodule.dim; ++i)
        for (Index j = 0; j < b.dim; ++j) {
            Vec<Fp> fi = zeros(F2, dual.bimodule.dim, 1), xj = zeros(F2, b.dim, 1);
            fi(i) = F2.one();
            xj(j) = F2.one();
            EXPECT_EQ(Vec<Fp>(ev.mat * ev.t.pure(fi, xj)), Vec<Fp>(dual.functionals[i].col(j)));
        }
    Vec<Fp> zf = zeros(F2, 2, 1), x = zeros(F2, 2, 1);
    x(0) = F2.one();
    EXPECT_TRUE(is_zero<Fp>(Mat<Fp>(ev.mat * ev.t.pure(zf, x))));
}

TEST(Projective, FreeSimpleZero)
{
    auto a = truncated_polynomial(QQ, 2);
    Projectivity<Rational> pf = is_projective(free_module(a, 2));
    EXPECT_TRUE(pf.projective);
    EXPECT_EQ(Mat<Rational>(pf.cover.map * pf.section), eye(QQ, 4));
    EXPECT_FALSE(is_projective(simple_top(a)).projective);
    EXPECT_TRUE(is_projective(zero_module(a)).projective);
    EXPECT_FALSE(is_projective(simple_top(truncated_polynomial(F2, 2))).projective);
}

TEST(Projective, SummandOfProductAlgebra)
{
    auto a = diagonal_algebra(QQ, 2);
    Module<Rational> p = projective_module(a, a->basis_vector(0));
    EXPECT_EQ(p.dim(), 1);
    EXPECT_TRUE(is_projective(p).projective);
}

TEST(ProjectiveCover, SimpleOverDualNumbers)
{
    auto a = truncated_polynomial(QQ, 2);
    ProjectiveCover<Rational> c = projective_cover(simple_top(a));
    EXPECT_EQ(c.projective.dim(), 2);
    ASSERT_EQ(c.multiplicity.size(), 1u);
    EXPECT_EQ(c.multiplicity[0], 1);
    EXPECT_TRUE(radical_submodule(c.projective).contains(Subspace<Rational>::kernel(c.map)));
}

TEST(ProjectiveCover, ProjectiveAndZero)
{
    auto a = truncated_polynomial(F2, 3);
    ProjectiveCover<Fp> c = projective_cover(regular_module(a));
    EXPECT_EQ(c.projective.dim(), 3);
    EXPECT_EQ(rank<Fp>(c.map), 3);
    ProjectiveCover<Fp> z = projective_cover(zero_module(a));
    EXPECT_EQ(z.projective.dim(), 0);
}

TEST(ProjectiveCover, TwoVertices)
{
    auto a = diagonal_algebra(QQ, 2);
    ProjectiveCover<Rational> c = projective_cover(free_module(a, 1));
    EXPECT_EQ(c.projective.dim(), 2);
    EXPECT_EQ(c.multiplicity, (std::vector<Index>{1, 1}));
}

TEST(Ext, SimpleOverDualNumbers)
{
    auto a = truncated_polynomial(QQ, 2);
    Module<Rational> k = simple_top(a);
    Ext1<Rational> e = ext1(k, k);
    EXPECT_EQ(e.dim, 1);
    EXPECT_EQ(e.cocycles.size(), 1u);

    // Oracle over F2 from the resolution 0 -> xA -> A -> k -> 0: Ext^1 is
    // Hom(xA, k) modulo restrictions of Hom(A, k), both enumerated.
    auto af = truncated_polynomial(F2, 2);
    Module<Fp> kf = simple_top(af), reg = regular_module(af);
    SubModule<Fp> xa = submodule(reg, Subspace<Fp>::span(rows(F2, {{0}, {1}}), 2));
    const auto hk = brute_homs(xa.module, kf);
    std::set<IMat> restricted;
    for (const auto& f : brute_homs(reg, kf))
        restricted.insert(mul(f, to_int(xa.inclusion), 1, 2, 1, 2));
    const int oracle = log_p(hk.size(), 2) - log_p(restricted.size(), 2);
    EXPECT_EQ(ext1(kf, kf).dim, oracle);
}

TEST(Ext, ProjectiveFirstArgument)
{
    auto a = truncated_polynomial(QQ, 2);
    EXPECT_EQ(ext1(regular_module(a), simple_top(a)).dim, 0);
    EXPECT_EQ(ext1(free_module(a, 2), regular_module(a)).dim, 0);
}

TEST(Ext, IndependentOfGenerators)
{
    auto a = truncated_polynomial(F2, 3);
    Module<Fp> reg = regular_module(a), k = simple_top(a);
    Module<Fp> mid = quotient_module(reg, Subspace<Fp>::span(rows(F2, {{0}, {0}, {1}}), 3)).module;
    for (const auto& m : {reg, k, mid})
        for (const auto& n : {reg, k, mid}) {
            const Index greedy = ext1(m, n).dim;
            const Index full = ext1(m, n, std::optional<Mat<Fp>>(eye(F2, m.dim()))).dim;
            EXPECT_EQ(greedy, full);
        }
}

TEST(Ext, NonGeneratingSetRejected)
{
    auto a = truncated_polynomial(QQ, 2);
    Module<Rational> reg = regular_module(a);
    EXPECT_THROW(ext1(reg, reg, std::optional<Mat<Rational>>(rows(QQ, {{0}, {1}}))), InputError);
}

TEST(ProjDim, Bounds)
{
    auto a = truncated_polynomial(QQ, 2);
    EXPECT_TRUE(pd_at_most(regular_module(a), 0));
    EXPECT_FALSE(pd_at_most(simple_top(a), 5));
    auto b = diagonal_algebra(QQ, 2);
    EXPECT_TRUE(pd_at_most(simple_top(b), 0));
}

TEST(Iso, ReflexiveDimensionPermuted)
{
    auto a = truncated_polynomial(QQ, 2);
    Module<Rational> reg = regular_module(a), k = simple_top(a);
    IsoResult<Rational> self = iso_test(reg, reg);
    ASSERT_TRUE(self.found());
    EXPECT_TRUE(is_morphism(reg, reg, self.iso));
    EXPECT_TRUE(is_invertible<Rational>(self.iso));

    IsoResult<Rational> dimr = iso_test(k, reg);
    EXPECT_EQ(dimr.verdict, IsoVerdict::not_isomorphic);
    EXPECT_NE(dimr.reason.find("dimension"), std::string::npos);

    Module<Rational> perm = permuted_regular(a);
    IsoResult<Rational> p = iso_test(reg, perm);
    ASSERT_TRUE(p.found());
    EXPECT_TRUE(is_morphism(reg, perm, p.iso));
}

TEST(Iso, SymmetricOnSamples)
{
    auto a = truncated_polynomial(F2, 3);
    Module<Fp> reg = regular_module(a), k = simple_top(a);
    Module<Fp> mid = quotient_module(reg, Subspace<Fp>::span(rows(F2, {{0}, {0}, {1}}), 3)).module;
    Module<Fp> k2 = direct_sum(std::vector<Module<Fp>>{k, k}).module;
    std::vector<Module<Fp>> ms{reg, k, mid, k2};
    for (std::size_t i = 0; i < ms.size(); ++i)
        for (std::size_t j = 0; j < ms.size(); ++j) {
            IsoResult<Fp> f = iso_test(ms[i], ms[j], 7);
            IsoResult<Fp> g = iso_test(ms[j], ms[i], 8);
            EXPECT_EQ(f.verdict, g.verdict);
            EXPECT_NE(f.verdict, IsoVerdict::inconclusive);
            EXPECT_EQ(f.found(), i == j);
        }
}

TEST(Exact, KernelCokernelImage)
{
    auto a = truncated_polynomial(QQ, 2);
    Module<Rational> reg = regular_module(a);
    EXPECT_EQ(kernel(ModuleMorphism<Rational>{reg, reg, eye(QQ, 2)}).module.dim(), 0);
    Module<Rational> z = zero_module(a);
    QuotientModule<Rational> c = cokernel(ModuleMorphism<Rational>{z, reg, zeros(QQ, 2, 0)});
    EXPECT_EQ(c.module.dim(), 2);
    EXPECT_EQ(iso_test(c.module, reg).verdict, IsoVerdict::isomorphic);

    // Multiplication by x: kernel and image are both xA, cokernel is k.
    ModuleMorphism<Rational> x{reg, reg, a->right(1)};
    ASSERT_TRUE(is_morphism(reg, reg, x.mat));
    EXPECT_EQ(kernel(x).module.dim(), 1);
    EXPECT_EQ(image(x).module.dim(), 1);
    EXPECT_EQ(iso_test(cokernel(x).module, simple_top(a)).verdict, IsoVerdict::isomorphic);
}

TEST(Exact, DirectSumMaps)
{
    auto a = truncated_polynomial(QQ, 2);
    Module<Rational> reg = regular_module(a), k = simple_top(a);
    DirectSum<Rational> s = direct_sum(std::vector<Module<Rational>>{reg, k});
    EXPECT_EQ(s.module.dim(), 3);
    EXPECT_TRUE(is_morphism(reg, s.module, s.inclusions[0]));
    EXPECT_TRUE(is_morphism(s.module, k, s.projections[1]));
    EXPECT_EQ(Mat<Rational>(s.projections[0] * s.inclusions[0]), eye(QQ, 2));
    EXPECT_TRUE(is_zero<Rational>(Mat<Rational>(s.projections[1] * s.inclusions[0])));
}

TEST(Adjunction, HomTensorSpotCheck)
{
    auto run = [](const auto& field) {
        using K = typename std::decay_t<decltype(field)>::Scalar;
        for (const auto& d : {fixtures::e1(field), fixtures::e4(field)}) {
            const AlgebraMorphism<K>& f = d.i1;
            std::vector<Module<K>> ms{regular_module(d.R()), simple_top(d.R())};
            std::vector<Module<K>> ns{regular_module(d.R1()), simple_top(d.R1())};
            for (const auto& m : ms)
                for (const auto& n : ns) {
                    Induced<K> ind = induce(f, m);
                    EXPECT_EQ(hom_space(ind.module(), n).dim(), hom_space(m, restrict_along(f, n)).dim());
                }
        }
    };
    run(QQ);
    run(F2);
}
