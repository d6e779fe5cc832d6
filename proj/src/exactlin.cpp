#include "phl/exactlin.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>

namespace phl {

namespace {

// Fraction-free Gauss-Jordan over Z: rows are scaled to primitive integer
// vectors, eliminated by cross-multiplication, and stripped of their content
// after every update. Rationals appear only in the final normalisation.
Echelon<Rational> rref_rational(const Mat<Rational>& a)
{
    const Index m = a.rows();
    const Index n = a.cols();
    std::vector<std::vector<mpz_class>> rows(static_cast<std::size_t>(m),
                                             std::vector<mpz_class>(static_cast<std::size_t>(n)));

    auto make_primitive = [n](std::vector<mpz_class>& row, Index from) {
        mpz_class g = 0;
        for (Index j = from; j < n; ++j) {
            if (row[j] != 0) {
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), row[j].get_mpz_t());
                if (g == 1)
                    return;
            }
        }
        if (g > 1)
            for (Index j = from; j < n; ++j)
                if (row[j] != 0)
                    mpz_divexact(row[j].get_mpz_t(), row[j].get_mpz_t(), g.get_mpz_t());
    };

    for (Index i = 0; i < m; ++i) {
        mpz_class l = 1;
        for (Index j = 0; j < n; ++j) {
            const mpq_class& q = a(i, j).value();
            if (q != 0)
                mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
        }
        auto& row = rows[static_cast<std::size_t>(i)];
        for (Index j = 0; j < n; ++j) {
            const mpq_class& q = a(i, j).value();
            if (q != 0)
                row[j] = q.get_num() * (l / q.get_den());
        }
        make_primitive(row, 0);
    }

    std::vector<Index> pivots;
    Index r = 0;
    for (Index c = 0; c < n && r < m; ++c) {
        Index best = -1;
        for (Index i = r; i < m; ++i) {
            const mpz_class& v = rows[i][c];
            if (v != 0 && (best < 0 || mpz_cmpabs(v.get_mpz_t(), rows[best][c].get_mpz_t()) < 0))
                best = i;
        }
        if (best < 0)
            continue;
        std::swap(rows[r], rows[best]);
        auto& prow = rows[r];
        if (prow[c] < 0)
            for (Index j = c; j < n; ++j)
                prow[j] = -prow[j];
        for (Index i = 0; i < m; ++i) {
            if (i == r || rows[i][c] == 0)
                continue;
            auto& row = rows[i];
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), prow[c].get_mpz_t(), row[c].get_mpz_t());
            mpz_class pa = prow[c] / g;
            mpz_class rb = row[c] / g;
            for (Index j = 0; j < n; ++j) {
                if (j < c && row[j] == 0)
                    continue;
                if (prow[j] == 0) {
                    if (row[j] != 0)
                        row[j] *= pa;
                } else {
                    row[j] = pa * row[j] - rb * prow[j];
                }
            }
            make_primitive(row, 0);
        }
        pivots.push_back(c);
        ++r;
    }

    Echelon<Rational> out;
    out.rows.resize(r, n);
    for (Index i = 0; i < r; ++i) {
        const mpz_class& p = rows[i][pivots[i]];
        for (Index j = 0; j < n; ++j)
            out.rows(i, j) = Rational(mpq_class(rows[i][j], p));
    }
    out.pivots = std::move(pivots);
    return out;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p)
{
    std::uint64_t result = 1, base = a % p, e = p - 2;
    while (e) {
        if (e & 1)
            result = result * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return result;
}

Echelon<Fp> rref_prime(const Mat<Fp>& a)
{
    const Index m = a.rows();
    const Index n = a.cols();
    std::uint32_t p = 0;
    for (Index j = 0; j < n && !p; ++j)
        for (Index i = 0; i < m && !p; ++i)
            p = a(i, j).modulus();

    Echelon<Fp> out;
    if (!p) {
        // All entries are untyped literals; only exact zeros are supported here.
        for (Index j = 0; j < n; ++j)
            for (Index i = 0; i < m; ++i)
                if (!a(i, j).is_zero())
                    throw std::logic_error("untyped prime-field matrix in row reduction");
        out.rows.resize(0, n);
        return out;
    }

    std::vector<std::uint64_t> w(static_cast<std::size_t>(m * n));
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < n; ++j)
            w[i * n + j] = Fp(a(i, j).raw(), p).residue();

    std::vector<Index> pivots;
    Index r = 0;
    for (Index c = 0; c < n && r < m; ++c) {
        Index piv = -1;
        for (Index i = r; i < m; ++i)
            if (w[i * n + c]) {
                piv = i;
                break;
            }
        if (piv < 0)
            continue;
        if (piv != r)
            for (Index j = 0; j < n; ++j)
                std::swap(w[piv * n + j], w[r * n + j]);
        std::uint64_t inv = inv_mod(w[r * n + c], p);
        for (Index j = c; j < n; ++j)
            w[r * n + j] = w[r * n + j] * inv % p;
        for (Index i = 0; i < m; ++i) {
            if (i == r)
                continue;
            std::uint64_t f = w[i * n + c];
            if (!f)
                continue;
            std::uint64_t nf = p - f;
            for (Index j = c; j < n; ++j) {
                std::uint64_t v = w[r * n + j];
                if (v)
                    w[i * n + j] = (w[i * n + j] + nf * v) % p;
            }
        }
        pivots.push_back(c);
        ++r;
    }
    out.rows.resize(r, n);
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < n; ++j)
            out.rows(i, j) = Fp(static_cast<long long>(w[i * n + j]), p);
    out.pivots = std::move(pivots);
    return out;
}

} // namespace

template <class K>
K one_like(const Mat<K>& a)
{
    if constexpr (std::is_same_v<K, Fp>) {
        for (Index j = 0; j < a.cols(); ++j)
            for (Index i = 0; i < a.rows(); ++i)
                if (a(i, j).typed())
                    return Fp(1, a(i, j).modulus());
    }
    return K(1);
}

template <class K>
Echelon<K> rref(const Mat<K>& a)
{
    if constexpr (std::is_same_v<K, Rational>)
        return rref_rational(a);
    else
        return rref_prime(a);
}

template <class K>
Index rank(const Mat<K>& a)
{
    if (a.rows() == 0 || a.cols() == 0)
        return 0;
    // The transpose has fewer columns to sweep when a is tall.
    if (a.rows() > a.cols())
        return rref<K>(a.transpose()).rank();
    return rref<K>(a).rank();
}

template <class K>
Mat<K> null_space(const Mat<K>& a)
{
    const Index n = a.cols();
    Echelon<K> e = rref<K>(a);
    std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
    for (Index p : e.pivots)
        is_pivot[p] = true;
    std::vector<Index> free;
    for (Index j = 0; j < n; ++j)
        if (!is_pivot[j])
            free.push_back(j);
    const K one = one_like<K>(a);
    Mat<K> basis = Mat<K>::Zero(n, static_cast<Index>(free.size()));
    for (std::size_t k = 0; k < free.size(); ++k) {
        const Index f = free[k];
        basis(f, static_cast<Index>(k)) = one;
        for (Index i = 0; i < e.rank(); ++i)
            basis(e.pivots[i], static_cast<Index>(k)) = -e.rows(i, f);
    }
    return basis;
}

template <class K>
LinearSolution<K> solve(const Mat<K>& a, const Vec<K>& b)
{
    if (a.rows() != b.rows())
        throw std::invalid_argument("solve: dimension mismatch (" + std::to_string(a.rows()) +
                                    " equations, right-hand side of length " +
                                    std::to_string(b.rows()) + ")");
    LinearSolution<K> out;
    Mat<K> aug(a.rows(), a.cols() + 1);
    aug << a, b;
    Echelon<K> e = rref<K>(aug);
    const bool consistent = e.pivots.empty() || e.pivots.back() != a.cols();
    if (consistent) {
        Vec<K> x = Vec<K>::Zero(a.cols());
        for (Index i = 0; i < e.rank(); ++i)
            x(e.pivots[i]) = e.rows(i, a.cols());
        out.particular = std::move(x);
    }
    out.kernel = Subspace<K>::span(null_space<K>(a), a.cols()).basis();
    return out;
}

template <class K>
std::optional<Mat<K>> solve_particular(const Mat<K>& a, const Mat<K>& b)
{
    if (a.rows() != b.rows())
        throw std::invalid_argument("solve_particular: dimension mismatch");
    Mat<K> aug(a.rows(), a.cols() + b.cols());
    aug << a, b;
    Echelon<K> e = rref<K>(aug);
    if (!e.pivots.empty() && e.pivots.back() >= a.cols())
        return std::nullopt;
    Mat<K> x = Mat<K>::Zero(a.cols(), b.cols());
    for (Index i = 0; i < e.rank(); ++i)
        x.row(e.pivots[i]) = e.rows.row(i).tail(b.cols());
    return x;
}

template <class K>
std::optional<Mat<K>> inverse(const Mat<K>& a)
{
    if (a.rows() != a.cols())
        return std::nullopt;
    const Index n = a.rows();
    if (n == 0)
        return Mat<K>(0, 0);
    Mat<K> aug(n, 2 * n);
    aug << a, Mat<K>(Mat<K>::Identity(n, n) * one_like<K>(a));
    Echelon<K> e = rref<K>(aug);
    if (e.rank() < n || e.pivots[n - 1] != n - 1)
        return std::nullopt;
    return Mat<K>(e.rows.rightCols(n));
}

template <class K>
Mat<K> kron(const Mat<K>& a, const Mat<K>& b)
{
    const Index br = b.rows(), bc = b.cols();
    Mat<K> out = Mat<K>::Zero(a.rows() * br, a.cols() * bc);
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) {
            if (a(i, j) == K(0))
                continue;
            out.block(i * br, j * bc, br, bc) = a(i, j) * b;
        }
    return out;
}

template <class K>
Mat<K> hcat(const std::vector<Mat<K>>& blocks, Index rows)
{
    Index cols = 0;
    for (const auto& b : blocks)
        cols += b.cols();
    Mat<K> out(rows, cols);
    Index at = 0;
    for (const auto& b : blocks) {
        if (b.rows() != rows)
            throw std::invalid_argument("hcat: row mismatch");
        out.middleCols(at, b.cols()) = b;
        at += b.cols();
    }
    return out;
}

template <class K>
Mat<K> vcat(const std::vector<Mat<K>>& blocks, Index cols)
{
    Index rows = 0;
    for (const auto& b : blocks)
        rows += b.rows();
    Mat<K> out(rows, cols);
    Index at = 0;
    for (const auto& b : blocks) {
        if (b.cols() != cols)
            throw std::invalid_argument("vcat: column mismatch");
        out.middleRows(at, b.rows()) = b;
        at += b.rows();
    }
    return out;
}

template <class K>
Mat<K> block_diagonal(const std::vector<Mat<K>>& blocks)
{
    Index rows = 0, cols = 0;
    for (const auto& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    Mat<K> out = Mat<K>::Zero(rows, cols);
    Index r = 0, c = 0;
    for (const auto& b : blocks) {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows();
        c += b.cols();
    }
    return out;
}

template <class K>
std::string to_string(const Mat<K>& a)
{
    std::ostringstream os;
    os << '[';
    for (Index i = 0; i < a.rows(); ++i) {
        if (i)
            os << "; ";
        for (Index j = 0; j < a.cols(); ++j) {
            if (j)
                os << ' ';
            os << a(i, j).str();
        }
    }
    os << ']';
    return os.str();
}

template <class K>
std::size_t matrix_hash(const Mat<K>& a)
{
    std::size_t h = std::hash<Index>{}(a.rows() * 1000003 + a.cols());
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            h ^= scalar_hash(a(i, j)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

template <class K>
Subspace<K> Subspace<K>::span(const Mat<K>& generators)
{
    return span(generators, generators.rows());
}

template <class K>
Subspace<K> Subspace<K>::span(const Mat<K>& generators, Index ambient)
{
    if (generators.cols() == 0)
        return Subspace(ambient);
    Echelon<K> e = rref<K>(generators.transpose());
    return Subspace(Mat<K>(e.rows.transpose()), std::move(e.pivots));
}

template <class K>
Subspace<K> Subspace<K>::kernel(const Mat<K>& a)
{
    return kernel(a, one_like<K>(a));
}

template <class K>
Subspace<K> Subspace<K>::kernel(const Mat<K>& a, const K& one)
{
    const Index n = a.cols();
    Echelon<K> e = rref<K>(a);
    if (e.rank() == 0) {
        Mat<K> id = Mat<K>::Zero(n, n);
        std::vector<Index> piv(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i) {
            id(i, i) = one;
            piv[static_cast<std::size_t>(i)] = i;
        }
        return Subspace(std::move(id), std::move(piv));
    }
    std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
    for (Index p : e.pivots)
        is_pivot[p] = true;
    std::vector<Index> free;
    for (Index j = 0; j < n; ++j)
        if (!is_pivot[j])
            free.push_back(j);
    Mat<K> basis = Mat<K>::Zero(n, static_cast<Index>(free.size()));
    for (std::size_t k = 0; k < free.size(); ++k) {
        basis(free[k], static_cast<Index>(k)) = one;
        for (Index i = 0; i < e.rank(); ++i)
            basis(e.pivots[i], static_cast<Index>(k)) = -e.rows(i, free[k]);
    }
    return span(basis, n);
}

template <class K>
Subspace<K> Subspace<K>::whole(Index ambient)
{
    std::vector<Index> piv(static_cast<std::size_t>(ambient));
    for (Index i = 0; i < ambient; ++i)
        piv[i] = i;
    return Subspace(Mat<K>::Identity(ambient, ambient), std::move(piv));
}

template <class K>
Mat<K> Subspace<K>::coords(const Mat<K>& vectors) const
{
    Mat<K> out(dim(), vectors.cols());
    for (Index k = 0; k < dim(); ++k)
        out.row(k) = vectors.row(pivots_[k]);
    return out;
}

template <class K>
bool Subspace<K>::contains(const Mat<K>& vectors) const
{
    if (vectors.rows() != ambient())
        throw std::invalid_argument("Subspace::contains: ambient mismatch");
    if (vectors.cols() == 0)
        return true;
    return is_zero<K>(vectors - basis_ * coords(vectors));
}

template <class K>
Subspace<K> Subspace<K>::sum(const Subspace& other) const
{
    Mat<K> g(ambient(), dim() + other.dim());
    g << basis_, other.basis_;
    return span(g, ambient());
}

template <class K>
Subspace<K> Subspace<K>::intersect(const Subspace& other) const
{
    if (dim() == 0 || other.dim() == 0)
        return Subspace(ambient());
    Mat<K> g(ambient(), dim() + other.dim());
    g << basis_, -other.basis_;
    Mat<K> ker = null_space<K>(g);
    return span(Mat<K>(basis_ * ker.topRows(dim())), ambient());
}

template <class K>
Subspace<K> Subspace<K>::image(const Mat<K>& map) const
{
    return span(Mat<K>(map * basis_), map.rows());
}

template <class K>
Quotient<K>::Quotient(const Subspace<K>& relations, const K& one) : relations_(relations)
{
    const Index n = relations.ambient();
    std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
    for (Index p : relations.pivots())
        is_pivot[p] = true;
    std::vector<Index> rest;
    for (Index j = 0; j < n; ++j)
        if (!is_pivot[j])
            rest.push_back(j);
    const Index t = static_cast<Index>(rest.size());
    project_ = Mat<K>::Zero(t, n);
    section_ = Mat<K>::Zero(n, t);
    const Mat<K>& b = relations.basis();
    for (Index j = 0; j < t; ++j) {
        project_(j, rest[j]) = one;
        section_(rest[j], j) = one;
        for (Index k = 0; k < relations.dim(); ++k)
            project_(j, relations.pivots()[k]) = -b(rest[j], k);
    }
}

std::string to_string(SearchVerdict v)
{
    switch (v) {
    case SearchVerdict::found:
        return "found";
    case SearchVerdict::none_exhaustive:
        return "none (exhaustive)";
    case SearchVerdict::none_inconclusive:
        return "none found (inconclusive)";
    }
    return "?";
}

std::uint64_t power_count(std::uint64_t p, std::uint64_t n)
{
    if (p == 0)
        return std::numeric_limits<std::uint64_t>::max();
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < n; ++i) {
        if (r > std::numeric_limits<std::uint64_t>::max() / p)
            return std::numeric_limits<std::uint64_t>::max();
        r *= p;
    }
    return r;
}

template <class K>
SpanSearch<K> invertible_in_span(const std::vector<Mat<K>>& basis, const Field<K>& field,
                                 const SearchOptions& options)
{
    SpanSearch<K> out;
    if (basis.empty()) {
        out.verdict = SearchVerdict::none_exhaustive;
        return out;
    }
    const Index n = basis.front().rows();
    for (const auto& b : basis)
        if (b.rows() != n || b.cols() != n)
            throw std::invalid_argument("invertible_in_span: matrices must be square of equal size");
    const Index m = static_cast<Index>(basis.size());
    if (n == 0) {
        out.verdict = SearchVerdict::found;
        out.coeffs = Vec<K>::Zero(m);
        out.element = Mat<K>(0, 0);
        return out;
    }

    auto accept = [&](const Vec<K>& c) {
        Mat<K> e = combine(basis, c, n, n);
        if (rank<K>(e) == n) {
            out.verdict = SearchVerdict::found;
            out.coeffs = c;
            out.element = std::move(e);
            return true;
        }
        return false;
    };

    for (Index i = 0; i < m; ++i) {
        Vec<K> c = Vec<K>::Constant(m, field.zero());
        c(i) = field.one();
        if (accept(c))
            return out;
    }
    if (m > 1 && accept(Vec<K>::Constant(m, field.one())))
        return out;

    std::mt19937_64 rng(options.seed);
    for (int t = 0; t < options.random_tries; ++t) {
        Vec<K> c(m);
        for (Index i = 0; i < m; ++i)
            c(i) = field.random(rng, 2 + t / 8);
        if (accept(c))
            return out;
    }

    if (field.finite() && power_count(field.order(), static_cast<std::uint64_t>(m)) <= options.ceiling) {
        if (enumerate_vectors(field, m, [&](const Vec<K>& c) { return accept(c); }))
            return out;
        out.verdict = SearchVerdict::none_exhaustive;
        return out;
    }
    out.verdict = SearchVerdict::none_inconclusive;
    return out;
}

#define PHL_INSTANTIATE_EXACTLIN(K)                                                           \
    template K one_like<K>(const Mat<K>&);                                                    \
    template Echelon<K> rref<K>(const Mat<K>&);                                               \
    template Index rank<K>(const Mat<K>&);                                                    \
    template Mat<K> null_space<K>(const Mat<K>&);                                             \
    template LinearSolution<K> solve<K>(const Mat<K>&, const Vec<K>&);                        \
    template std::optional<Mat<K>> solve_particular<K>(const Mat<K>&, const Mat<K>&);         \
    template std::optional<Mat<K>> inverse<K>(const Mat<K>&);                                 \
    template Mat<K> kron<K>(const Mat<K>&, const Mat<K>&);                                    \
    template Mat<K> hcat<K>(const std::vector<Mat<K>>&, Index);                               \
    template Mat<K> vcat<K>(const std::vector<Mat<K>>&, Index);                               \
    template Mat<K> block_diagonal<K>(const std::vector<Mat<K>>&);                            \
    template std::string to_string<K>(const Mat<K>&);                                         \
    template std::size_t matrix_hash<K>(const Mat<K>&);                                       \
    template class Subspace<K>;                                                               \
    template class Quotient<K>;                                                               \
    template SpanSearch<K> invertible_in_span<K>(const std::vector<Mat<K>>&, const Field<K>&, \
                                                 const SearchOptions&);

PHL_INSTANTIATE_EXACTLIN(Rational)
PHL_INSTANTIATE_EXACTLIN(Fp)

} // namespace phl
