#ifndef PHL_EXACTLIN_HPP
#define PHL_EXACTLIN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "phl/scalar.hpp"

namespace phl {

using Index = Eigen::Index;

template <class K>
using Mat = Eigen::Matrix<K, Eigen::Dynamic, Eigen::Dynamic>;
template <class K>
using Vec = Eigen::Matrix<K, Eigen::Dynamic, 1>;

/// Reduced row echelon form: only the nonzero rows are kept, and
/// `pivots[i]` is the column of the leading one in row i.
template <class K>
struct Echelon
{
    Mat<K> rows;
    std::vector<Index> pivots;

    Index rank() const { return static_cast<Index>(pivots.size()); }
};

template <class K>
Echelon<K> rref(const Mat<K>& a);

/// The unit of the field the entries of `a` live in (untyped when `a` has
/// no typed prime-field entry).
template <class K>
K one_like(const Mat<K>& a);

template <class K>
Mat<K> eye(const Field<K>& field, Index n)
{
    return Mat<K>::Identity(n, n) * field.one();
}

template <class K>
Mat<K> zeros(const Field<K>& field, Index rows, Index cols)
{
    return Mat<K>::Constant(rows, cols, field.zero());
}

template <class K>
Index rank(const Mat<K>& a);

/// Kernel basis indexed by the free columns: basis(free[j], k) = [j == k].
template <class K>
Mat<K> null_space(const Mat<K>& a);

template <class K>
struct LinearSolution
{
    std::optional<Vec<K>> particular;
    /// Columns span {x : A x = 0}; transposed, they form a reduced echelon matrix.
    Mat<K> kernel;
};

template <class K>
LinearSolution<K> solve(const Mat<K>& a, const Vec<K>& b);

/// Some X with A X = B, or nothing when the system is inconsistent.
template <class K>
std::optional<Mat<K>> solve_particular(const Mat<K>& a, const Mat<K>& b);

template <class K>
std::optional<Mat<K>> inverse(const Mat<K>& a);

template <class K>
bool is_zero(const Mat<K>& a)
{
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            if (!(a(i, j) == K(0)))
                return false;
    return true;
}

template <class K>
bool is_invertible(const Mat<K>& a)
{
    return a.rows() == a.cols() && rank(a) == a.rows();
}

template <class K>
Mat<K> kron(const Mat<K>& a, const Mat<K>& b);

/// Column-major vectorisation and its inverse.
template <class K>
Vec<K> vectorize(const Mat<K>& a)
{
    Vec<K> v(a.size());
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            v(i + j * a.rows()) = a(i, j);
    return v;
}

template <class K>
Mat<K> unvectorize(const Vec<K>& v, Index rows, Index cols)
{
    Mat<K> a(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            a(i, j) = v(i + j * rows);
    return a;
}

/// Horizontal concatenation of column blocks with a common row count.
template <class K>
Mat<K> hcat(const std::vector<Mat<K>>& blocks, Index rows);

template <class K>
Mat<K> vcat(const std::vector<Mat<K>>& blocks, Index cols);

template <class K>
Mat<K> block_diagonal(const std::vector<Mat<K>>& blocks);

/// Rewrites every entry in canonical form for the given field (typed residues
/// over F_p); needed before hashing or printing.
template <class K>
Mat<K> canonical(const Mat<K>& a, const Field<K>& field)
{
    Mat<K> out(a.rows(), a.cols());
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            out(i, j) = field.normalize(a(i, j));
    return out;
}

template <class K>
std::string to_string(const Mat<K>& a);

template <class K>
std::size_t matrix_hash(const Mat<K>& a);

/// A linear subspace of K^n with a basis normalised so that
/// basis(pivots[j], k) = [j == k]; coordinates are read off the pivot rows.
template <class K>
class Subspace
{
public:
    Subspace() = default;
    explicit Subspace(Index ambient) : basis_(ambient, 0) {}

    /// Canonical (reduced echelon) basis of the column span.
    static Subspace span(const Mat<K>& generators);
    static Subspace span(const Mat<K>& generators, Index ambient);
    static Subspace kernel(const Mat<K>& a);
    /// `one` types the basis when `a` has no typed entries (zero rows, say).
    static Subspace kernel(const Mat<K>& a, const K& one);
    static Subspace whole(Index ambient);

    Index dim() const { return basis_.cols(); }
    Index ambient() const { return basis_.rows(); }
    const Mat<K>& basis() const { return basis_; }
    const std::vector<Index>& pivots() const { return pivots_; }

    /// Coordinates of vectors known to lie in the subspace.
    Mat<K> coords(const Mat<K>& vectors) const;
    bool contains(const Mat<K>& vectors) const;
    bool contains(const Subspace& other) const { return contains(other.basis_); }
    bool equals(const Subspace& other) const
    {
        return dim() == other.dim() && contains(other);
    }

    Subspace sum(const Subspace& other) const;
    Subspace intersect(const Subspace& other) const;
    /// Image of the subspace under a linear map.
    Subspace image(const Mat<K>& map) const;

private:
    Subspace(Mat<K> basis, std::vector<Index> pivots)
        : basis_(std::move(basis)), pivots_(std::move(pivots))
    {
    }

    Mat<K> basis_;
    std::vector<Index> pivots_;
};

/// K^n / V with an explicit projection and a section, project * section = I.
template <class K>
class Quotient
{
public:
    Quotient() = default;
    /// `one` fixes the field of the projection and section when the
    /// relations carry no typed entries.
    explicit Quotient(const Subspace<K>& relations, const K& one = K(1));

    Index dim() const { return project_.rows(); }
    Index ambient() const { return project_.cols(); }
    const Mat<K>& project() const { return project_; }
    const Mat<K>& section() const { return section_; }
    const Subspace<K>& relations() const { return relations_; }

    /// Matrix of the map induced on the quotients by `map`, which must send
    /// the relations of `*this` into the relations of `target`.
    Mat<K> induced(const Mat<K>& map, const Quotient& target) const
    {
        return target.project_ * map * section_;
    }

private:
    Subspace<K> relations_;
    Mat<K> project_;
    Mat<K> section_;
};

enum class SearchVerdict { found, none_exhaustive, none_inconclusive };

std::string to_string(SearchVerdict v);

template <class K>
struct SpanSearch
{
    SearchVerdict verdict = SearchVerdict::none_inconclusive;
    Vec<K> coeffs;
    Mat<K> element;

    bool found() const { return verdict == SearchVerdict::found; }
};

struct SearchOptions
{
    std::uint64_t seed = 1;
    /// Exhaustive enumeration is used over F_p while p^n stays below this.
    std::uint64_t ceiling = std::uint64_t(1) << 16;
    int random_tries = 48;
};

/// Looks for an invertible linear combination of square matrices. Basis
/// elements and their sum are tried first, then seeded random combinations,
/// then (over F_p, below the ceiling) every combination in order.
template <class K>
SpanSearch<K> invertible_in_span(const std::vector<Mat<K>>& basis, const Field<K>& field,
                                 const SearchOptions& options = {});

/// Saturating p^n, or UINT64_MAX when the field is infinite.
std::uint64_t power_count(std::uint64_t p, std::uint64_t n);

/// Calls `visit(coeffs)` on every vector of F_p^n in lexicographic order until
/// it returns true. Returns whether a visit returned true.
template <class K, class Visit>
bool enumerate_vectors(const Field<K>& field, Index n, Visit&& visit)
{
    Vec<K> c(n);
    for (Index i = 0; i < n; ++i)
        c(i) = field.zero();
    std::vector<std::uint64_t> digits(static_cast<std::size_t>(n), 0);
    const std::uint64_t q = field.order();
    while (true) {
        if (visit(static_cast<const Vec<K>&>(c)))
            return true;
        Index i = 0;
        for (; i < n; ++i) {
            auto& d = digits[static_cast<std::size_t>(i)];
            if (++d < q) {
                c(i) = field.element(d);
                break;
            }
            d = 0;
            c(i) = field.zero();
        }
        if (i == n)
            return false;
    }
}

template <class K>
Mat<K> combine(const std::vector<Mat<K>>& basis, const Vec<K>& coeffs, Index rows, Index cols)
{
    Mat<K> out = Mat<K>::Zero(rows, cols);
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (!(coeffs(static_cast<Index>(i)) == K(0)))
            out += coeffs(static_cast<Index>(i)) * basis[i];
    return out;
}

} // namespace phl

#endif // PHL_EXACTLIN_HPP
