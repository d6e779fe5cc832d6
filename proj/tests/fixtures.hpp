#ifndef PHL_TEST_FIXTURES_HPP
#define PHL_TEST_FIXTURES_HPP

#include "phl/algebra.hpp"

namespace fixtures {

using namespace phl;

template <class K>
Mat<K> rows(const Field<K>& f, std::initializer_list<std::initializer_list<long>> rs)
{
    Mat<K> m(static_cast<Index>(rs.size()), static_cast<Index>(rs.begin()->size()));
    Index i = 0;
    for (auto& r : rs) {
        Index j = 0;
        for (long v : r)
            m(i, j++) = f.from_int(v);
        ++i;
    }
    return m;
}

// R1 = k[x]/(x^2), R2 = R' = k, pi1 = evaluation at 0, pi2 = id.
template <class K>
PullbackData<K> e1(const Field<K>& f)
{
    auto r1 = truncated_polynomial(f, 2);
    auto k = diagonal_algebra(f, 1);
    AlgebraMorphism<K> pi1{r1, k, rows(f, {{1, 0}}), "pi1"};
    AlgebraMorphism<K> pi2{k, k, rows(f, {{1}}), "pi2"};
    return pullback(pi1, pi2);
}

// R1 = R2 = k, R' = k[t]/(t^2), both maps the inclusion.
template <class K>
PullbackData<K> e2(const Field<K>& f)
{
    auto k1 = diagonal_algebra(f, 1);
    auto k2 = diagonal_algebra(f, 1);
    auto rp = truncated_polynomial(f, 2, "t");
    AlgebraMorphism<K> pi1{k1, rp, rows(f, {{1}, {0}}), "pi1"};
    AlgebraMorphism<K> pi2{k2, rp, rows(f, {{1}, {0}}), "pi2"};
    return pullback(pi1, pi2);
}

// R1 = k x k, pi1 = first projection, R2 = R' = k, pi2 = id.
template <class K>
PullbackData<K> e3(const Field<K>& f)
{
    auto r1 = diagonal_algebra(f, 2);
    auto k = diagonal_algebra(f, 1);
    AlgebraMorphism<K> pi1{r1, k, rows(f, {{1, 0}}), "pi1"};
    AlgebraMorphism<K> pi2{k, k, rows(f, {{1}}), "pi2"};
    return pullback(pi1, pi2);
}

// R1 = k[x]/(x^3) -> R' = k[t]/(t^2), x -> t; R2 = k included in R'.
template <class K>
PullbackData<K> e4(const Field<K>& f)
{
    auto r1 = truncated_polynomial(f, 3);
    auto k = diagonal_algebra(f, 1);
    auto rp = truncated_polynomial(f, 2, "t");
    AlgebraMorphism<K> pi1{r1, rp, rows(f, {{1, 0, 0}, {0, 1, 0}}), "pi1"};
    AlgebraMorphism<K> pi2{k, rp, rows(f, {{1}, {0}}), "pi2"};
    return pullback(pi1, pi2);
}

} // namespace fixtures

#endif
