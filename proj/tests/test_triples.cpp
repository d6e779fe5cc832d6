#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "phl/triples.hpp"

using namespace phl;
using fixtures::rows;
using namespace oracle;

namespace {

const Field<Rational> QQ{};
const Field<Fp> F2{2};

template <class K>
Module<K> simple_top(const AlgebraPtr<K>& a)
{
    Module<K> reg = regular_module(a);
    return quotient_module(reg, radical_submodule(reg)).module;
}

bool has_line(const Check& c, const std::string& needle)
{
    for (const auto& l : c.lines)
        if (l.find(needle) != std::string::npos)
            return true;
    return false;
}

std::string dump(const Check& c)
{
    std::string s;
    for (const auto& l : c.lines)
        s += l + "\n";
    return s;
}

// (k, k; c) over E2 with c(1 (x) 1) = (1 + t) (x) 1.
template <class K>
Triple<K> e2_twist(const PullbackData<K>& d)
{
    const Field<K>& f = d.R()->field();
    Module<K> x1 = regular_module(d.R1()), x2 = regular_module(d.R2());
    // R' (x)_k k = R' with basis 1 (x) 1, t (x) 1; c is right multiplication by 1 + t.
    Induced<K> t1 = induce(d.pi1, x1), t2 = induce(d.pi2, x2);
    Mat<K> a1(2, 2), a2(2, 2);
    for (Index k = 0; k < 2; ++k) {
        a1.col(k) = t1.tm.t.pure(d.Rp()->basis_vector(k), d.R1()->unit());
        a2.col(k) = t2.tm.t.pure(d.Rp()->basis_vector(k), d.R2()->unit());
    }
    Vec<K> twist(2);
    twist << f.one(), f.one();
    Mat<K> c = a2 * d.Rp()->right_mult(twist) * *inverse<K>(a1);
    return make_triple(d, x1, x2, c);
}

} // namespace

TEST(Ind, RegularModule)
{
    auto d = fixtures::e1(QQ);
    IndResult<Rational> r = ind(d, regular_module(d.R()));
    EXPECT_EQ(iso_test(r.triple.x1, regular_module(d.R1())).verdict, IsoVerdict::isomorphic);
    EXPECT_EQ(iso_test(r.triple.x2, regular_module(d.R2())).verdict, IsoVerdict::isomorphic);
    EXPECT_TRUE(is_gluing(r.triple));
}

TEST(Ind, ZeroModule)
{
    auto d = fixtures::e1(QQ);
    IndResult<Rational> r = ind(d, zero_module(d.R()));
    EXPECT_EQ(r.triple.x1.dim(), 0);
    EXPECT_EQ(r.triple.x2.dim(), 0);
}

TEST(Ind, E1SimpleLegs)
{
    auto d = fixtures::e1(F2);
    Module<Fp> k = simple_top(d.R());
    IndResult<Fp> r = ind(d, k);
    // Oracle: plain tensor dimensions of R_i (x)_R k by enumeration.
    Bimodule<Fp> b1 = algebra_bimodule(identity_morphism(d.R1()), d.i1);
    Bimodule<Fp> b2 = algebra_bimodule(identity_morphism(d.R2()), d.i2);
    EXPECT_EQ(r.triple.x1.dim(), brute_tensor_dim_f2(b1.right_module(), k));
    EXPECT_EQ(r.triple.x2.dim(), brute_tensor_dim_f2(b2.right_module(), k));
    EXPECT_EQ(r.triple.x1.dim(), 1);
    EXPECT_EQ(r.triple.c.rows(), 1);
    EXPECT_TRUE(is_gluing(r.triple));
}

TEST(Pb, E2TwistIsZero)
{
    for (int pass = 0; pass < 2; ++pass) {
        auto check = [](const auto& field) {
            auto d = fixtures::e2(field);
            auto t = e2_twist(d);
            EXPECT_TRUE(is_gluing(t));
            EXPECT_EQ(pb(t).module().dim(), 0);
        };
        pass == 0 ? check(QQ) : check(F2);
    }
}

TEST(Pb, OfIndRegularAndZero)
{
    auto d = fixtures::e1(QQ);
    Module<Rational> reg = regular_module(d.R());
    PbResult<Rational> p = pb(ind(d, reg).triple);
    EXPECT_EQ(iso_test(p.module(), reg).verdict, IsoVerdict::isomorphic);
    EXPECT_EQ(pb(zero_triple(d)).module().dim(), 0);
}

TEST(Unit, ZeroAndRegular)
{
    auto d = fixtures::e1(QQ);
    Unit<Rational> z = unit(d, zero_module(d.R()));
    EXPECT_EQ(z.eta.size(), 0);
    Unit<Rational> u = unit(d, regular_module(d.R()));
    EXPECT_TRUE(is_invertible<Rational>(u.eta));
    EXPECT_TRUE(is_separated(d, regular_module(d.R())));
}

TEST(Unit, EpiOnSamples)
{
    auto check = [](const auto& d) {
        std::mt19937_64 rng(5);
        for (int s = 0; s < 6; ++s) {
            auto m = random_module(d.R(), rng, 4);
            auto u = unit(d, m);
            EXPECT_EQ(rank(u.eta), u.pb.module().dim());
        }
    };
    check(fixtures::e1(QQ));
    check(fixtures::e3(QQ));
    check(fixtures::e1(F2));
}

TEST(Counit, ProjectiveGluingIsIso)
{
    auto d = fixtures::e1(F2);
    Triple<Fp> t = ind(d, regular_module(d.R())).triple;
    Counit<Fp> c = counit(t);
    EXPECT_TRUE(is_invertible<Fp>(c.eps.f1));
    EXPECT_TRUE(is_invertible<Fp>(c.eps.f2));
    Counit<Fp> z = counit(zero_triple(d));
    EXPECT_EQ(z.eps.f1.size(), 0);
}

TEST(Counit, E2TwistHasZeroSource)
{
    auto d = fixtures::e2(QQ);
    Counit<Rational> c = counit(e2_twist(d));
    EXPECT_EQ(c.ind.triple.x1.dim(), 0);
    EXPECT_EQ(c.ind.triple.x2.dim(), 0);
    EXPECT_NE(c.eps.f1.rows(), c.eps.f1.cols());
}

TEST(Adjunction, RegularAgainstInd)
{
    auto d = fixtures::e1(F2);
    Module<Fp> reg = regular_module(d.R());
    Triple<Fp> t = ind(d, reg).triple;
    Diagnostics ad = adjunction_check(d, reg, t);
    ASSERT_TRUE(ad.ok()) << ad.first();
    // Oracle: End_R(R) by enumeration.
    const int end_dim = log_p(brute_homs(reg, reg).size(), 2);
    EXPECT_EQ(end_dim, 2);
    EXPECT_EQ(triple_hom(t, t).dim(), end_dim);
}

TEST(Adjunction, ZeroObjects)
{
    auto d = fixtures::e1(QQ);
    EXPECT_TRUE(adjunction_check(d, zero_module(d.R()), ind(d, regular_module(d.R())).triple).ok());
    EXPECT_TRUE(adjunction_check(d, regular_module(d.R()), zero_triple(d)).ok());
}

TEST(Adjunction, SampledE3)
{
    auto d = fixtures::e3(QQ);
    std::mt19937_64 rng(11);
    for (int s = 0; s < 4; ++s) {
        Module<Rational> m = random_module(d.R(), rng, 4);
        auto t = random_gluing_triple(d, rng, 4);
        ASSERT_TRUE(t.has_value());
        Diagnostics ad = adjunction_check(d, m, *t);
        EXPECT_TRUE(ad.ok()) << ad.first();
    }
}

TEST(Gluing, E2TwistIsGluing)
{
    auto d = fixtures::e2(F2);
    EXPECT_TRUE(is_gluing(e2_twist(d)));
}

TEST(SequenceM, ExactOnE1)
{
    auto d = fixtures::e1(QQ);
    EXPECT_TRUE(verify_sequence_M(d, zero_module(d.R())).ok());
    Diagnostics r = verify_sequence_M(d, regular_module(d.R()));
    EXPECT_TRUE(r.ok()) << r.first();
    ASSERT_FALSE(r.notes.empty());
    EXPECT_EQ(r.notes[0], "sequence M dims 2 -> 3 -> 1 -> 0");
    EXPECT_TRUE(verify_sequence_M(d, simple_top(d.R())).ok());
    EXPECT_THROW(verify_sequence_M(fixtures::e2(QQ), zero_module(fixtures::e2(QQ).R())), HypothesisRefused);
}

TEST(CounitCriterion, E1SamplesAndE3Skip)
{
    auto d = fixtures::e1(QQ);
    std::mt19937_64 rng(3);
    int seen = 0;
    for (int s = 0; s < 5; ++s)
        if (auto t = random_gluing_triple(d, rng, 4)) {
            Diagnostics c = counit_iso_gluing_check(*t);
            EXPECT_TRUE(c.ok()) << c.first();
            EXPECT_TRUE(c.notes.empty());
            ++seen;
        }
    EXPECT_GT(seen, 0);
    EXPECT_TRUE(counit_iso_gluing_check(zero_triple(d)).ok());

    auto d3 = fixtures::e3(QQ);
    Diagnostics c3 = counit_iso_gluing_check(ind(d3, regular_module(d3.R())).triple);
    ASSERT_EQ(c3.notes.size(), 1u);
    EXPECT_NE(c3.notes[0].find("unknown"), std::string::npos);
}

TEST(Milnor, E1OverF2)
{
    auto d = fixtures::e1(F2);
    Check c = milnor_check(d, {});
    EXPECT_EQ(c.status, Status::pass) << dump(c);
    // Krull-Schmidt oracle: R is local of dimension 2, so R^n with 2n <= 4.
    int oracle = 0;
    for (int n = 0; 2 * n <= 4; ++n)
        ++oracle;
    EXPECT_TRUE(has_line(c, "dim <= 4: " + std::to_string(oracle))) << dump(c);
    EXPECT_TRUE(has_line(c, "over F2): " + std::to_string(oracle))) << dump(c);
}

TEST(Milnor, E3OverF2)
{
    auto d = fixtures::e3(F2);
    Check c = milnor_check(d, {});
    EXPECT_EQ(c.status, Status::pass) << dump(c);
    // R = k x k: multiplicity pairs (a, b) with a + b <= 4.
    int oracle = 0;
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; a + b <= 4; ++b)
            ++oracle;
    EXPECT_TRUE(has_line(c, "over F2): " + std::to_string(oracle))) << dump(c);
}

TEST(Milnor, TrivialDiagram)
{
    auto a = truncated_polynomial(F2, 2);
    AlgebraMorphism<Fp> id{a, a, eye(F2, 2), "id"};
    auto d = pullback(id, id);
    Check c = milnor_check(d, {});
    EXPECT_EQ(c.status, Status::pass) << dump(c);
}

TEST(Milnor, E2Refused)
{
    Check c = milnor_check(fixtures::e2(F2), {});
    EXPECT_EQ(c.status, Status::refused);
    EXPECT_TRUE(has_line(c, "surjective"));
}

TEST(Milnor, RationalSampled)
{
    Check c = milnor_check(fixtures::e1(QQ), {});
    EXPECT_EQ(c.status, Status::pass) << dump(c);
    EXPECT_TRUE(has_line(c, "sampled"));
}

TEST(Suites, LemmaSuitePasses)
{
    Check a = lemma_suite(fixtures::e1(QQ));
    EXPECT_EQ(a.status, Status::pass) << dump(a);
    Check b = lemma_suite(fixtures::e3(QQ));
    EXPECT_EQ(b.status, Status::pass) << dump(b);
    EXPECT_TRUE(has_line(b, "skipped"));
    Check c = lemma_suite(fixtures::e1(F2));
    EXPECT_EQ(c.status, Status::pass) << dump(c);
}

TEST(Suites, SeparatedEquivalence)
{
    Check a = separated_equiv_check(fixtures::e1(QQ));
    EXPECT_EQ(a.status, Status::pass) << dump(a);
    EXPECT_EQ(separated_equiv_check(fixtures::e3(QQ)).status, Status::refused);
}

TEST(Suites, Counterexample)
{
    auto d = fixtures::e2(QQ);
    Vec<Rational> twist(2);
    twist << Rational(1), Rational(1);
    Check c = counterexample_check(d, twist);
    EXPECT_EQ(c.status, Status::pass) << dump(c);
    EXPECT_TRUE(has_line(c, "dim Pb = 0"));
}

TEST(Functoriality, IndAndPbPreserveComposition)
{
    auto d = fixtures::e1(QQ);
    std::mt19937_64 rng(17);
    Module<Rational> a = regular_module(d.R()), b = random_module(d.R(), rng, 4), c = simple_top(d.R());
    HomSpace<Rational> hab = hom_space(a, b), hbc = hom_space(b, c);
    IndResult<Rational> ia = ind(d, a), ib = ind(d, b), ic = ind(d, c);
    for (Index i = 0; i < hab.dim(); ++i)
        for (Index j = 0; j < hbc.dim(); ++j) {
            Mat<Rational> g = hab.element(i), h = hbc.element(j);
            TripleMorphism<Rational> whole = ind_map(ia, ic, Mat<Rational>(h * g));
            TripleMorphism<Rational> parts = compose(ind_map(ib, ic, h), ind_map(ia, ib, g));
            EXPECT_EQ(whole.f1, parts.f1);
            EXPECT_EQ(whole.f2, parts.f2);
            // Pb of the composite.
            PbResult<Rational> pa = pb(ia.triple), pbb = pb(ib.triple), pc = pb(ic.triple);
            EXPECT_EQ(pb_map(pa, pc, whole), Mat<Rational>(pb_map(pbb, pc, ind_map(ib, ic, h)) *
                                                           pb_map(pa, pbb, ind_map(ia, ib, g))));
        }
}

TEST(TripleIso, SymmetricOnSamples)
{
    auto d = fixtures::e1(F2);
    std::mt19937_64 rng(23);
    std::vector<Triple<Fp>> ts{ind(d, regular_module(d.R())).triple, ind(d, simple_top(d.R())).triple};
    for (int s = 0; s < 3; ++s)
        if (auto t = random_gluing_triple(d, rng, 3))
            ts.push_back(*t);
    for (std::size_t i = 0; i < ts.size(); ++i)
        for (std::size_t j = 0; j < ts.size(); ++j) {
            TripleIso<Fp> a = triple_iso(ts[i], ts[j], 3), b = triple_iso(ts[j], ts[i], 4);
            EXPECT_EQ(a.verdict, b.verdict);
            if (a.found())
                EXPECT_TRUE(is_triple_morphism(ts[i], ts[j], a.iso));
        }
}
