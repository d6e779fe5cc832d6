#include <gtest/gtest.h>

#include <random>

#include "phl/exactlin.hpp"

using namespace phl;

namespace {

using Q = Rational;
const Field<Q> QQ{};
const Field<Fp> F2{2};

template <class K>
Mat<K> from_rows(const Field<K>& f, std::initializer_list<std::initializer_list<long>> rows)
{
    Mat<K> m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
    Index i = 0;
    for (auto& r : rows) {
        Index j = 0;
        for (long v : r)
            m(i, j++) = f.from_int(v);
        ++i;
    }
    return m;
}

// Determinant by cofactor expansion along the first row.
Q cofactor_det(const Mat<Q>& a)
{
    const Index n = a.rows();
    if (n == 0)
        return Q(1);
    if (n == 1)
        return a(0, 0);
    Q det(0);
    for (Index j = 0; j < n; ++j) {
        Mat<Q> minor(n - 1, n - 1);
        for (Index r = 1; r < n; ++r)
            for (Index c = 0, cc = 0; c < n; ++c)
                if (c != j)
                    minor(r - 1, cc++) = a(r, c);
        Q term = a(0, j) * cofactor_det(minor);
        det = (j % 2 == 0) ? det + term : det - term;
    }
    return det;
}

// x = adj(A) b / det(A), i.e. Cramer's rule.
Vec<Q> cramer(const Mat<Q>& a, const Vec<Q>& b)
{
    Q d = cofactor_det(a);
    Vec<Q> x(a.rows());
    for (Index j = 0; j < a.cols(); ++j) {
        Mat<Q> aj = a;
        aj.col(j) = b;
        x(j) = cofactor_det(aj) / d;
    }
    return x;
}

} // namespace

TEST(Solve, IdentityUnitVector)
{
    Mat<Q> a = Mat<Q>::Identity(3, 3);
    Vec<Q> b = Vec<Q>::Zero(3);
    b(1) = Q(1);
    auto s = solve<Q>(a, b);
    ASSERT_TRUE(s.particular);
    EXPECT_EQ(*s.particular, b);
    EXPECT_EQ(s.kernel.cols(), 0);
}

TEST(Solve, OnePlusOneOverF2)
{
    Mat<Fp> a = from_rows(F2, {{1, 1}});
    Vec<Fp> b(1);
    b(0) = F2.zero();
    auto s = solve<Fp>(a, b);
    ASSERT_TRUE(s.particular);
    EXPECT_TRUE(is_zero<Fp>(*s.particular));
    ASSERT_EQ(s.kernel.cols(), 1);
    EXPECT_EQ(s.kernel(0, 0), F2.one());
    EXPECT_EQ(s.kernel(1, 0), F2.one());
}

TEST(Solve, MatchesCramerOnRandomRationalSystems)
{
    std::mt19937_64 rng(7);
    int checked = 0;
    while (checked < 20) {
        Mat<Q> a(3, 3);
        Vec<Q> b(3);
        for (Index i = 0; i < 3; ++i) {
            b(i) = Q(static_cast<long>(rng() % 11) - 5, static_cast<long>(rng() % 3) + 1);
            for (Index j = 0; j < 3; ++j)
                a(i, j) = Q(static_cast<long>(rng() % 13) - 6, static_cast<long>(rng() % 4) + 1);
        }
        if (cofactor_det(a).is_zero())
            continue;
        auto s = solve<Q>(a, b);
        ASSERT_TRUE(s.particular);
        EXPECT_EQ(*s.particular, cramer(a, b));
        EXPECT_EQ(s.kernel.cols(), 0);
        auto inv = inverse<Q>(a);
        ASSERT_TRUE(inv);
        EXPECT_EQ(Mat<Q>(a * *inv), Mat<Q>(Mat<Q>::Identity(3, 3)));
        ++checked;
    }
}

TEST(Solve, InconsistentSystem)
{
    Mat<Q> a = from_rows(QQ, {{1, 1}, {2, 2}});
    Vec<Q> b(2);
    b << Q(1), Q(3);
    auto s = solve<Q>(a, b);
    EXPECT_FALSE(s.particular);
    EXPECT_EQ(s.kernel.cols(), 1);
}

TEST(Solve, DimensionMismatchThrows)
{
    Mat<Q> a = Mat<Q>::Identity(2, 2);
    Vec<Q> b = Vec<Q>::Zero(3);
    EXPECT_THROW(solve<Q>(a, b), std::invalid_argument);
}

TEST(Solve, DeterministicAndSubstitutes)
{
    std::mt19937_64 rng(3);
    for (int t = 0; t < 30; ++t) {
        Mat<Q> a(4, 6);
        for (Index i = 0; i < 4; ++i)
            for (Index j = 0; j < 6; ++j)
                a(i, j) = Q(static_cast<long>(rng() % 5) - 2);
        a.row(3) = a.row(0) + a.row(1);
        Vec<Q> b = a * Vec<Q>::Constant(6, Q(1, 2));
        auto s1 = solve<Q>(a, b);
        auto s2 = solve<Q>(a, b);
        ASSERT_TRUE(s1.particular);
        EXPECT_EQ(Vec<Q>(a * *s1.particular), b);
        EXPECT_EQ(*s1.particular, *s2.particular);
        EXPECT_EQ(s1.kernel, s2.kernel);
        EXPECT_TRUE(is_zero<Q>(Mat<Q>(a * s1.kernel)));
        EXPECT_EQ(rank<Q>(a) + s1.kernel.cols(), a.cols());
    }
}

TEST(Rank, Basics)
{
    EXPECT_EQ(rank<Q>(Mat<Q>::Zero(3, 4)), 0);
    EXPECT_EQ(rank<Q>(Mat<Q>::Identity(5, 5)), 5);
    // (pi1 | -pi2) : R1 (+) R2 -> R' for the k[x]/(x^2) diagram over F2:
    // pi1(1) = 1, pi1(x) = 0, pi2 = id.
    Mat<Fp> ev = from_rows(F2, {{1, 0, -1}});
    EXPECT_EQ(rank<Fp>(ev), 1);
}

TEST(Rank, RankNullityOverF5)
{
    const Field<Fp> f5(5);
    std::mt19937_64 rng(11);
    for (int t = 0; t < 40; ++t) {
        Index r = 1 + static_cast<Index>(rng() % 5), c = 1 + static_cast<Index>(rng() % 6);
        Mat<Fp> a(r, c);
        for (Index i = 0; i < r; ++i)
            for (Index j = 0; j < c; ++j)
                a(i, j) = f5.random(rng);
        Mat<Fp> k = null_space<Fp>(a);
        EXPECT_EQ(rank<Fp>(a) + k.cols(), c);
        EXPECT_TRUE(is_zero<Fp>(Mat<Fp>(a * k)));
    }
}

TEST(Subspace, SumIntersectQuotient)
{
    Mat<Q> g1 = from_rows(QQ, {{1, 0}, {0, 1}, {0, 0}});
    Mat<Q> g2 = from_rows(QQ, {{0}, {1}, {1}});
    auto v1 = Subspace<Q>::span(g1);
    auto v2 = Subspace<Q>::span(g2);
    EXPECT_EQ(v1.sum(v2).dim(), 3);
    EXPECT_EQ(v1.intersect(v2).dim(), 0);
    Quotient<Q> q(v1);
    EXPECT_EQ(q.dim(), 1);
    EXPECT_EQ(Mat<Q>(q.project() * q.section()), Mat<Q>(Mat<Q>::Identity(1, 1)));
    EXPECT_TRUE(is_zero<Q>(Mat<Q>(q.project() * g1)));
}

TEST(InvertibleInSpan, Identity)
{
    auto r = invertible_in_span<Q>({Mat<Q>::Identity(2, 2)}, QQ);
    ASSERT_TRUE(r.found());
    EXPECT_EQ(r.element, Mat<Q>(Mat<Q>::Identity(2, 2)));
}

TEST(InvertibleInSpan, DiagonalUnitsOverF2)
{
    Mat<Fp> e11 = from_rows(F2, {{1, 0}, {0, 0}});
    Mat<Fp> e22 = from_rows(F2, {{0, 0}, {0, 1}});
    auto r = invertible_in_span<Fp>({e11, e22}, F2);
    ASSERT_TRUE(r.found());
    EXPECT_EQ(r.element, Mat<Fp>(e11 + e22));
}

TEST(InvertibleInSpan, NilpotentSpanIsExhaustivelyEmpty)
{
    Mat<Fp> e12 = from_rows(F2, {{0, 1}, {0, 0}});
    auto r = invertible_in_span<Fp>({e12}, F2);
    EXPECT_EQ(r.verdict, SearchVerdict::none_exhaustive);
    Mat<Q> q12 = from_rows(QQ, {{0, 1}, {0, 0}});
    EXPECT_EQ(invertible_in_span<Q>({q12}, QQ).verdict, SearchVerdict::none_inconclusive);
}

TEST(InvertibleInSpan, SizeMismatchThrows)
{
    EXPECT_THROW(invertible_in_span<Q>({Mat<Q>::Identity(2, 2), Mat<Q>::Identity(3, 3)}, QQ),
                 std::invalid_argument);
}

TEST(Kron, VectorisationIdentity)
{
    Mat<Q> n = from_rows(QQ, {{1, 2}, {3, 4}});
    Mat<Q> x = from_rows(QQ, {{1, -1, 0}, {2, 0, 5}});
    Mat<Q> m = from_rows(QQ, {{1, 0}, {1, 1}, {0, 3}});
    Vec<Q> lhs = vectorize<Q>(Mat<Q>(n * x * m));
    Vec<Q> rhs = kron<Q>(Mat<Q>(m.transpose()), n) * vectorize<Q>(x);
    EXPECT_EQ(lhs, rhs);
}
