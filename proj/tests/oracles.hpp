#ifndef PHL_TEST_ORACLES_HPP
#define PHL_TEST_ORACLES_HPP

#include <set>
#include <vector>

#include "phl/modrep.hpp"

namespace oracle {

using namespace phl;

// Brute-force oracles over F_p: plain integer arithmetic, no elimination.

using IMat = std::vector<std::vector<long>>;

inline IMat to_int(const Mat<Fp>& m)
{
    IMat out(static_cast<std::size_t>(m.rows()), std::vector<long>(static_cast<std::size_t>(m.cols())));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            out[i][j] = static_cast<long>(m(i, j).raw());
    return out;
}

inline IMat mul(const IMat& a, const IMat& b, std::size_t n, std::size_t k, std::size_t m, long p)
{
    IMat c(n, std::vector<long>(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            long s = 0;
            for (std::size_t l = 0; l < k; ++l)
                s += a[i][l] * b[l][j];
            c[i][j] = s % p;
        }
    return c;
}

// Every f: M -> N (dn x dm over F_p) commuting with all actions.
inline std::vector<IMat> brute_homs(const Module<Fp>& m, const Module<Fp>& n)
{
    const long p = m.field().p();
    const std::size_t dm = static_cast<std::size_t>(m.dim()), dn = static_cast<std::size_t>(n.dim());
    const std::size_t cells = dm * dn;
    std::size_t total = 1;
    for (std::size_t i = 0; i < cells; ++i)
        total *= static_cast<std::size_t>(p);
    std::vector<IMat> out;
    for (std::size_t code = 0; code < total; ++code) {
        IMat f(dn, std::vector<long>(dm));
        std::size_t c = code;
        for (std::size_t i = 0; i < dn; ++i)
            for (std::size_t j = 0; j < dm; ++j) {
                f[i][j] = static_cast<long>(c % static_cast<std::size_t>(p));
                c /= static_cast<std::size_t>(p);
            }
        bool ok = true;
        for (Index a = 0; a < m.alg()->dim() && ok; ++a)
            ok = mul(f, to_int(m.act(a)), dn, dm, dm, p) == mul(to_int(n.act(a)), f, dn, dn, dm, p);
        if (ok)
            out.push_back(f);
    }
    return out;
}

inline int log_p(std::size_t count, long p)
{
    int d = 0;
    while (count > 1) {
        count /= static_cast<std::size_t>(p);
        ++d;
    }
    return d;
}

// Dimension of the span of the given vectors, by counting distinct F2 combinations.
inline int brute_span_dim_f2(const std::vector<std::vector<long>>& gens)
{
    std::set<std::vector<long>> seen;
    const std::size_t n = gens.empty() ? 0 : gens.front().size();
    for (std::size_t mask = 0; mask < (std::size_t(1) << gens.size()); ++mask) {
        std::vector<long> v(n, 0);
        for (std::size_t g = 0; g < gens.size(); ++g)
            if (mask >> g & 1)
                for (std::size_t i = 0; i < n; ++i)
                    v[i] = (v[i] + gens[g][i]) % 2;
        seen.insert(v);
    }
    return log_p(seen.size(), 2);
}

// Plain dimension of M (x)_A N over F2: dm*dn minus the rank of the
// relations m.b (x) n - m (x) b.n over all basis elements b.
inline int brute_tensor_dim_f2(const Module<Fp>& right, const Module<Fp>& left)
{
    const std::size_t dm = static_cast<std::size_t>(right.dim()), dn = static_cast<std::size_t>(left.dim());
    std::vector<std::vector<long>> rel;
    for (Index b = 0; b < right.alg()->dim(); ++b) {
        IMat r = to_int(right.act(b)), l = to_int(left.act(b));
        for (std::size_t i = 0; i < dm; ++i)
            for (std::size_t j = 0; j < dn; ++j) {
                std::vector<long> v(dm * dn, 0);
                for (std::size_t k = 0; k < dm; ++k)
                    v[k * dn + j] = (v[k * dn + j] + r[k][i]) % 2;
                for (std::size_t k = 0; k < dn; ++k)
                    v[i * dn + k] = (v[i * dn + k] + l[k][j]) % 2;
                rel.push_back(v);
            }
    }
    // Keep the count of generators small for enumeration: greedy independent subset.
    std::vector<std::vector<long>> basis;
    for (const auto& v : rel) {
        auto trial = basis;
        trial.push_back(v);
        if (brute_span_dim_f2(trial) > static_cast<int>(basis.size()))
            basis = trial;
    }
    return static_cast<int>(dm * dn) - static_cast<int>(basis.size());
}

} // namespace oracle

#endif
