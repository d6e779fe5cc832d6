#include "phl/chaincx.hpp"

#include <algorithm>

namespace phl {

namespace {

template <class K>
Vec<K> unit_vector(const Field<K>& f, Index n, Index i)
{
    Vec<K> v = zeros(f, n, 1);
    v(i) = f.one();
    return v;
}

template <class K>
Mat<K> basis_of(const Field<K>& f, const Subspace<K>& s)
{
    return s.dim() == 0 ? zeros(f, s.ambient(), 0) : s.basis();
}

template <class K>
void same_alg(const Complex<K>& x, const Complex<K>& y, const char* what)
{
    if (x.alg() != y.alg())
        throw InputError(std::string(what) + ": complexes over different algebras");
}

template <class K>
Mat<K> select(const Field<K>& f, Index n, const std::vector<Index>& idx)
{
    Mat<K> e = zeros(f, n, static_cast<Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k)
        e(idx[k], static_cast<Index>(k)) = f.one();
    return e;
}

template <class K>
Module<K> restrict_to(const Module<K>& m, const Mat<K>& e)
{
    std::vector<Mat<K>> act;
    for (const auto& a : m.acts())
        act.push_back(Mat<K>(e.transpose() * a * e));
    return Module<K>(m.alg(), e.cols(), std::move(act), m.side());
}

} // namespace

template <class K>
Complex<K>::Complex(AlgebraPtr<K> alg, int lo, std::vector<Module<K>> terms, std::vector<Mat<K>> diffs)
    : alg_(std::move(alg)), lo_(lo), terms_(std::move(terms)), diffs_(std::move(diffs))
{
    if (!alg_)
        throw InputError("complex: missing algebra");
    const std::size_t n = terms_.size();
    if (diffs_.size() != (n == 0 ? 0 : n - 1))
        throw InputError("complex: expected " + std::to_string(n == 0 ? 0 : n - 1) + " differentials");
    for (std::size_t k = 0; k < n; ++k) {
        if (terms_[k].alg() != alg_)
            throw InputError("complex: term in degree " + std::to_string(lo_ + static_cast<int>(k)) +
                             " is over another algebra");
        if (terms_[k].side() != Side::left)
            throw InputError("complex: terms must be left modules");
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const std::string deg = std::to_string(lo_ + static_cast<int>(k));
        const Mat<K>& d = diffs_[k];
        if (d.rows() != terms_[k + 1].dim() || d.cols() != terms_[k].dim())
            throw InputError("complex: d^" + deg + " has the wrong shape");
        if (!is_morphism(terms_[k], terms_[k + 1], d))
            throw InputError("complex: d^" + deg + " is not a module map");
        if (k + 2 < n && !is_zero<K>(Mat<K>(diffs_[k + 1] * d)))
            throw InputError("complex: d^" + std::to_string(lo_ + static_cast<int>(k) + 1) + " d^" + deg +
                             " is not zero");
    }
}

template <class K>
Module<K> Complex<K>::term(int n) const
{
    return contains(n) ? terms_[static_cast<std::size_t>(n - lo_)] : zero_module(alg_);
}

template <class K>
Mat<K> Complex<K>::d(int n) const
{
    if (n >= lo_ && n < hi())
        return diffs_[static_cast<std::size_t>(n - lo_)];
    return zeros(field(), dim(n + 1), dim(n));
}

template <class K>
Index Complex<K>::total_dim() const
{
    Index s = 0;
    for (const auto& t : terms_)
        s += t.dim();
    return s;
}

template <class K>
Complex<K> zero_complex(const AlgebraPtr<K>& a)
{
    return Complex<K>(a, 0, {}, {});
}

template <class K>
Complex<K> stalk(const Module<K>& m, int n)
{
    return Complex<K>(m.alg(), n, {m}, {});
}

template <class K>
Complex<K> trim(const Complex<K>& x)
{
    int lo = x.lo(), hi = x.hi();
    while (lo <= hi && x.dim(lo) == 0)
        ++lo;
    while (hi >= lo && x.dim(hi) == 0)
        --hi;
    if (lo > hi)
        return zero_complex(x.alg());
    std::vector<Module<K>> terms;
    std::vector<Mat<K>> diffs;
    for (int n = lo; n <= hi; ++n) {
        terms.push_back(x.term(n));
        if (n < hi)
            diffs.push_back(x.d(n));
    }
    return Complex<K>(x.alg(), lo, std::move(terms), std::move(diffs));
}

template <class K>
Complex<K> complex_sum(const Complex<K>& x, const Complex<K>& y)
{
    same_alg(x, y, "complex_sum");
    if (x.empty())
        return y;
    if (y.empty())
        return x;
    const int lo = std::min(x.lo(), y.lo()), hi = std::max(x.hi(), y.hi());
    std::vector<Module<K>> terms;
    std::vector<Mat<K>> diffs;
    for (int n = lo; n <= hi; ++n) {
        terms.push_back(direct_sum<K>({x.term(n), y.term(n)}).module);
        if (n < hi)
            diffs.push_back(block_diagonal<K>({x.d(n), y.d(n)}));
    }
    return Complex<K>(x.alg(), lo, std::move(terms), std::move(diffs));
}

template <class K>
bool is_acyclic(const Complex<K>& x)
{
    for (int n = x.lo(); n <= x.hi(); ++n)
        if (homology(x, n).module().dim() != 0)
            return false;
    return true;
}

template <class K>
Mat<K> ChainMap<K>::at(int n) const
{
    if (source.contains(n))
        return comps[static_cast<std::size_t>(n - source.lo())];
    return zeros(source.field(), target.dim(n), 0);
}

template <class K>
Mat<K> Homotopy<K>::at(int n) const
{
    if (source.contains(n))
        return comps[static_cast<std::size_t>(n - source.lo())];
    return zeros(source.field(), target.dim(n - 1), 0);
}

template <class K>
bool is_chain_map(const ChainMap<K>& f)
{
    const Complex<K>& x = f.source;
    const Complex<K>& y = f.target;
    if (x.alg() != y.alg() || f.comps.size() != x.terms().size())
        return false;
    for (int n = x.lo(); n <= x.hi(); ++n) {
        const Mat<K> m = f.at(n);
        if (m.rows() != y.dim(n) || m.cols() != x.dim(n))
            return false;
        if (!is_morphism(x.term(n), y.term(n), m))
            return false;
        if (Mat<K>(y.d(n) * m) != Mat<K>(f.at(n + 1) * x.d(n)))
            return false;
    }
    return true;
}

template <class K>
ChainMap<K> identity_map(const Complex<K>& x)
{
    return chain_map(x, x, [&](int n) { return eye(x.field(), x.dim(n)); });
}

template <class K>
ChainMap<K> zero_map(const Complex<K>& x, const Complex<K>& y)
{
    return chain_map(x, y, [&](int n) { return zeros(x.field(), y.dim(n), x.dim(n)); });
}

template <class K>
ChainMap<K> compose(const ChainMap<K>& g, const ChainMap<K>& f)
{
    return chain_map(f.source, g.target, [&](int n) { return Mat<K>(g.at(n) * f.at(n)); });
}

template <class K>
ChainMap<K> operator+(const ChainMap<K>& f, const ChainMap<K>& g)
{
    return chain_map(f.source, f.target, [&](int n) { return Mat<K>(f.at(n) + g.at(n)); });
}

template <class K>
ChainMap<K> operator-(const ChainMap<K>& f, const ChainMap<K>& g)
{
    return chain_map(f.source, f.target, [&](int n) { return Mat<K>(f.at(n) - g.at(n)); });
}

template <class K>
ChainMap<K> scale(const K& a, const ChainMap<K>& f)
{
    return chain_map(f.source, f.target, [&](int n) { return Mat<K>(a * f.at(n)); });
}

template <class K>
bool operator==(const ChainMap<K>& f, const ChainMap<K>& g)
{
    if (f.source.lo() != g.source.lo() || f.comps.size() != g.comps.size())
        return false;
    for (std::size_t k = 0; k < f.comps.size(); ++k)
        if (f.comps[k] != g.comps[k])
            return false;
    return true;
}

template <class K>
bool is_chain_iso(const ChainMap<K>& f)
{
    const int lo = std::min(f.source.lo(), f.target.lo()), hi = std::max(f.source.hi(), f.target.hi());
    for (int n = lo; n <= hi; ++n) {
        if (f.source.dim(n) != f.target.dim(n))
            return false;
        if (f.source.dim(n) > 0 && !is_invertible<K>(f.at(n)))
            return false;
    }
    return true;
}

template <class K>
Homotopy<K> zero_homotopy(const Complex<K>& x, const Complex<K>& y)
{
    Homotopy<K> h{x, y, {}};
    for (int n = x.lo(); n <= x.hi(); ++n)
        h.comps.push_back(zeros(x.field(), y.dim(n - 1), x.dim(n)));
    return h;
}

template <class K>
ChainMap<K> boundary(const Homotopy<K>& h)
{
    const Complex<K>& x = h.source;
    const Complex<K>& y = h.target;
    return chain_map(x, y, [&](int n) { return Mat<K>(y.d(n - 1) * h.at(n) + h.at(n + 1) * x.d(n)); });
}

template <class K>
bool is_homotopy(const ChainMap<K>& f, const ChainMap<K>& g, const Homotopy<K>& h)
{
    return (f - g) == boundary(h);
}

template <class K>
Homotopy<K> sandwich(const ChainMap<K>& a, const Homotopy<K>& h, const ChainMap<K>& b)
{
    Homotopy<K> out{b.source, a.target, {}};
    for (int n = b.source.lo(); n <= b.source.hi(); ++n)
        out.comps.push_back(Mat<K>(a.at(n - 1) * h.at(n) * b.at(n)));
    return out;
}

template <class K>
Homotopy<K> operator+(const Homotopy<K>& h, const Homotopy<K>& k)
{
    Homotopy<K> out{h.source, h.target, {}};
    for (int n = h.source.lo(); n <= h.source.hi(); ++n)
        out.comps.push_back(Mat<K>(h.at(n) + k.at(n)));
    return out;
}

template <class K>
Homology<K> homology(const Complex<K>& x, int n)
{
    const Module<K> m = x.term(n);
    Subspace<K> z = Subspace<K>::kernel(x.d(n), x.field().one());
    if (z.ambient() != m.dim())
        z = Subspace<K>(m.dim());
    SubModule<K> cyc = submodule(m, z);
    const Mat<K> b = x.d(n - 1);
    Mat<K> bc = b.cols() == 0 ? zeros(x.field(), z.dim(), 0) : Mat<K>(z.coords(b));
    QuotientModule<K> q = quotient_module(cyc.module, Subspace<K>::span(bc, z.dim()));
    return {cyc, z, q};
}

template <class K>
Mat<K> homology_map(const ChainMap<K>& f, int n)
{
    Homology<K> hx = homology(f.source, n), hy = homology(f.target, n);
    Mat<K> img = f.at(n) * hx.cycles.inclusion * hx.q.section;
    return Mat<K>(hy.q.projection * hy.cycle_space.coords(img));
}

template <class K>
bool is_quasi_iso(const ChainMap<K>& f)
{
    const int lo = std::min(f.source.lo(), f.target.lo()), hi = std::max(f.source.hi(), f.target.hi());
    for (int n = lo; n <= hi; ++n) {
        Mat<K> h = homology_map(f, n);
        if (h.rows() != h.cols())
            return false;
        if (h.rows() > 0 && !is_invertible<K>(h))
            return false;
    }
    return true;
}

template <class K>
Complex<K> cone(const ChainMap<K>& f)
{
    const Complex<K>& x = f.source;
    const Complex<K>& y = f.target;
    same_alg(x, y, "cone");
    if (x.empty() && y.empty())
        return zero_complex(x.alg());
    int lo = y.empty() ? x.lo() - 1 : y.lo(), hi = y.empty() ? x.hi() - 1 : y.hi();
    if (!x.empty()) {
        lo = std::min(lo, x.lo() - 1);
        hi = std::max(hi, x.hi() - 1);
    }
    std::vector<Module<K>> terms;
    std::vector<Mat<K>> diffs;
    for (int n = lo; n <= hi; ++n) {
        terms.push_back(direct_sum<K>({x.term(n + 1), y.term(n)}).module);
        if (n == hi)
            break;
        const Index a = x.dim(n + 1), b = y.dim(n), a2 = x.dim(n + 2), b2 = y.dim(n + 1);
        Mat<K> d = zeros(x.field(), a2 + b2, a + b);
        d.block(0, 0, a2, a) = -x.d(n + 1);
        d.block(a2, 0, b2, a) = f.at(n + 1);
        d.block(a2, a, b2, b) = y.d(n);
        diffs.push_back(d);
    }
    return Complex<K>(x.alg(), lo, std::move(terms), std::move(diffs));
}

template <class K>
Vec<K> flatten(const Field<K>& field, const std::vector<Mat<K>>& comps)
{
    Index len = 0;
    for (const auto& c : comps)
        len += c.size();
    Vec<K> v = zeros(field, len, 1);
    Index at = 0;
    for (const auto& c : comps) {
        if (c.size() > 0)
            v.segment(at, c.size()) = vectorize<K>(c);
        at += c.size();
    }
    return v;
}

template <class K>
GradedHom<K> graded_hom(const Complex<K>& x, const Complex<K>& y, int shift)
{
    same_alg(x, y, "graded_hom");
    GradedHom<K> g{x, y, shift, {}, {}, 0};
    for (int n = x.lo(); n <= x.hi(); ++n) {
        g.offsets.push_back(g.dim);
        g.homs.push_back(hom_space(x.term(n), y.term(n + shift)));
        g.dim += g.homs.back().dim();
    }
    return g;
}

template <class K>
std::vector<Mat<K>> GradedHom<K>::element(const Vec<K>& c) const
{
    std::vector<Mat<K>> out;
    for (std::size_t k = 0; k < homs.size(); ++k) {
        const HomSpace<K>& h = homs[k];
        const int n = source.lo() + static_cast<int>(k);
        if (h.dim() == 0)
            out.push_back(zeros(source.field(), target.dim(n + shift), source.dim(n)));
        else
            out.push_back(h.combine(Vec<K>(c.segment(offsets[k], h.dim()))));
    }
    return out;
}

template <class K>
Vec<K> GradedHom<K>::coords(const std::vector<Mat<K>>& comps) const
{
    Vec<K> c = zeros(source.field(), dim, 1);
    for (std::size_t k = 0; k < homs.size(); ++k) {
        if (homs[k].dim() == 0)
            continue;
        if (!homs[k].contains(comps[k]))
            throw InputError("graded_hom: component in degree " + std::to_string(source.lo() + static_cast<int>(k)) +
                             " is not a module map");
        c.segment(offsets[k], homs[k].dim()) = homs[k].coords(comps[k]);
    }
    return c;
}

template <class K>
Mat<K> chain_condition(const GradedHom<K>& g)
{
    const Field<K>& f = g.source.field();
    const Complex<K>& x = g.source;
    const Complex<K>& y = g.target;
    return op_matrix(f, g.dim, flat_size(x, y, 1), [&](const Vec<K>& c) {
        ChainMap<K> m{x, y, g.element(c)};
        std::vector<Mat<K>> out;
        for (int n = x.lo(); n <= x.hi(); ++n)
            out.push_back(Mat<K>(y.d(n) * m.at(n) - m.at(n + 1) * x.d(n)));
        return flatten(f, out);
    });
}

template <class K>
Mat<K> boundary_matrix(const GradedHom<K>& g)
{
    const Field<K>& f = g.source.field();
    return op_matrix(f, g.dim, flat_size(g.source, g.target, 0), [&](const Vec<K>& c) {
        return flatten(f, boundary(Homotopy<K>{g.source, g.target, g.element(c)}).comps);
    });
}

template <class K>
Mat<K> embed_matrix(const GradedHom<K>& g)
{
    const Field<K>& f = g.source.field();
    return op_matrix(f, g.dim, flat_size(g.source, g.target, g.shift),
                     [&](const Vec<K>& c) { return flatten(f, g.element(c)); });
}

template <class K>
HomotopyHom<K> homotopy_hom(const Complex<K>& x, const Complex<K>& y)
{
    const Field<K>& f = x.field();
    HomotopyHom<K> out;
    out.maps = graded_hom(x, y, 0);
    out.homotopies = graded_hom(x, y, -1);
    out.cycles = Subspace<K>::kernel(chain_condition(out.maps), f.one());
    if (out.cycles.ambient() != out.maps.dim)
        out.cycles = Subspace<K>(out.maps.dim);
    // Null-homotopic maps: boundaries expressed in the Hom-basis coordinates.
    Mat<K> bd = boundary_matrix(out.homotopies);
    Mat<K> emb = embed_matrix(out.maps);
    Mat<K> gens = zeros(f, out.maps.dim, bd.cols());
    if (bd.cols() > 0 && out.maps.dim > 0) {
        // emb has full column rank, so coordinates are unique.
        auto sol = solve_particular<K>(emb, bd);
        if (!sol)
            throw HardFailure("homotopy_hom: d h + h d is not a sum of module maps");
        gens = *sol;
    }
    out.bounds = Subspace<K>::span(gens, out.maps.dim);
    if (!out.cycles.contains(out.bounds))
        throw HardFailure("homotopy_hom: a null-homotopic map fails the chain condition");
    Mat<K> rel = out.bounds.dim() == 0 ? zeros(f, out.cycles.dim(), 0) : Mat<K>(out.cycles.coords(out.bounds.basis()));
    out.classes = Quotient<K>(Subspace<K>::span(rel, out.cycles.dim()), f.one());
    return out;
}

template <class K>
ChainMap<K> HomotopyHom<K>::from_maps_coords(const Vec<K>& c) const
{
    return ChainMap<K>{maps.source, maps.target, maps.element(c)};
}

template <class K>
ChainMap<K> HomotopyHom<K>::element(Index k) const
{
    const Field<K>& f = maps.source.field();
    Vec<K> cyc = classes.section().col(k);
    return from_maps_coords(Vec<K>(basis_of(f, cycles) * cyc));
}

template <class K>
std::vector<ChainMap<K>> HomotopyHom<K>::basis() const
{
    std::vector<ChainMap<K>> out;
    for (Index k = 0; k < dim(); ++k)
        out.push_back(element(k));
    return out;
}

template <class K>
Vec<K> HomotopyHom<K>::class_of(const ChainMap<K>& f) const
{
    Vec<K> c = maps.coords(f.comps);
    if (!cycles.contains(Mat<K>(c)))
        throw InputError("homotopy_hom: not a chain map");
    return Vec<K>(classes.project() * cycles.coords(Mat<K>(c)));
}

template <class K>
std::optional<Homotopy<K>> null_homotopy_witness(const ChainMap<K>& f)
{
    GradedHom<K> g = graded_hom(f.source, f.target, -1);
    const Field<K>& fld = f.source.field();
    Vec<K> rhs = flatten(fld, f.comps);
    Homotopy<K> h = zero_homotopy(f.source, f.target);
    if (rhs.size() == 0 || is_zero<K>(Mat<K>(rhs)))
        return h;
    if (g.dim == 0)
        return std::nullopt;
    auto sol = solve_particular<K>(boundary_matrix(g), Mat<K>(rhs));
    if (!sol)
        return std::nullopt;
    h.comps = g.element(Vec<K>(sol->col(0)));
    if (!is_homotopy(f, zero_map(f.source, f.target), h))
        throw HardFailure("null_homotopy_witness: solution fails the homotopy identity");
    return h;
}

template <class K>
std::optional<HomotopyInverse<K>> homotopy_inverse(const ChainMap<K>& f)
{
    const Complex<K>& x = f.source;
    const Complex<K>& y = f.target;
    const Field<K>& fld = x.field();
    GradedHom<K> gs = graded_hom(y, x, 0);
    GradedHom<K> hx = graded_hom(x, x, -1);
    GradedHom<K> hy = graded_hom(y, y, -1);
    const Index ng = gs.dim, nh = hx.dim, nk = hy.dim;
    const Index fx = flat_size(x, x, 0), fy = flat_size(y, y, 0), fc = flat_size(y, x, 1);
    // Unknowns (g, h, k): g chain map, g f + d h + h d = id, f g + d k + k d = id.
    Mat<K> sys = zeros(fld, fc + fx + fy, ng + nh + nk);
    if (ng > 0) {
        sys.block(0, 0, fc, ng) = chain_condition(gs);
        sys.block(fc, 0, fx, ng) = op_matrix(fld, ng, fx, [&](const Vec<K>& c) {
            return flatten(fld, compose(ChainMap<K>{y, x, gs.element(c)}, f).comps);
        });
        sys.block(fc + fx, 0, fy, ng) = op_matrix(fld, ng, fy, [&](const Vec<K>& c) {
            return flatten(fld, compose(f, ChainMap<K>{y, x, gs.element(c)}).comps);
        });
    }
    if (nh > 0)
        sys.block(fc, ng, fx, nh) = boundary_matrix(hx);
    if (nk > 0)
        sys.block(fc + fx, ng + nh, fy, nk) = boundary_matrix(hy);
    Vec<K> rhs = zeros(fld, fc + fx + fy, 1);
    rhs.segment(fc, fx) = flatten(fld, identity_map(x).comps);
    rhs.segment(fc + fx, fy) = flatten(fld, identity_map(y).comps);
    HomotopyInverse<K> out{ChainMap<K>{y, x, gs.element(zeros(fld, ng, 1))}, zero_homotopy(x, x), zero_homotopy(y, y)};
    if (sys.cols() == 0) {
        if (!is_zero<K>(Mat<K>(rhs)))
            return std::nullopt;
    } else {
        auto sol = solve_particular<K>(sys, Mat<K>(rhs));
        if (!sol)
            return std::nullopt;
        Vec<K> s = sol->col(0);
        out.g.comps = gs.element(Vec<K>(s.segment(0, ng)));
        out.left.comps = hx.element(Vec<K>(s.segment(ng, nh)));
        out.right.comps = hy.element(Vec<K>(s.segment(ng + nh, nk)));
    }
    if (!is_chain_map(out.g) || !is_homotopy(identity_map(x), compose(out.g, f), out.left) ||
        !is_homotopy(identity_map(y), compose(f, out.g), out.right))
        throw HardFailure("homotopy_inverse: solution fails verification");
    return out;
}

template <class K>
TensorComplex<K> tensor_complex(const Bimodule<K>& b, const Complex<K>& x)
{
    if (b.right_alg != x.alg())
        throw InputError("tensor_complex: bimodule acts on the right through another algebra");
    TensorComplex<K> out;
    out.bdim = b.dim;
    std::vector<Module<K>> terms;
    for (int n = x.lo(); n <= x.hi(); ++n) {
        out.parts.push_back(tensor(b, x.term(n)));
        terms.push_back(out.parts.back().module);
    }
    std::vector<Mat<K>> diffs;
    const Mat<K> id = eye(x.field(), b.dim);
    for (int n = x.lo(); n < x.hi(); ++n) {
        const auto k = static_cast<std::size_t>(n - x.lo());
        diffs.push_back(tensor_map(out.parts[k], out.parts[k + 1], id, x.d(n)));
    }
    out.cx = x.empty() ? zero_complex(b.left_alg) : Complex<K>(b.left_alg, x.lo(), std::move(terms), std::move(diffs));
    return out;
}

namespace {

template <class K>
const TensorModule<K>* part_at(const std::vector<TensorModule<K>>& parts, const Complex<K>& cx, int n)
{
    return cx.contains(n) ? &parts[static_cast<std::size_t>(n - cx.lo())] : nullptr;
}

template <class K>
Mat<K> tensor_piece(const std::vector<TensorModule<K>>& sp, const Complex<K>& sx, const std::vector<TensorModule<K>>& tp,
                    const Complex<K>& tx, Index bdim, int ns, int nt, const Mat<K>& f)
{
    const TensorModule<K>* s = part_at(sp, sx, ns);
    const TensorModule<K>* t = part_at(tp, tx, nt);
    if (!s || !t)
        return zeros(sx.field(), tx.dim(nt), sx.dim(ns));
    return tensor_map(*s, *t, eye(sx.field(), bdim), f);
}

template <class K>
std::vector<TensorModule<K>> tms(const std::vector<Induced<K>>& parts)
{
    std::vector<TensorModule<K>> out;
    for (const auto& p : parts)
        out.push_back(p.tm);
    return out;
}

} // namespace

template <class K>
ChainMap<K> tensor_chain_map(const TensorComplex<K>& s, const TensorComplex<K>& t, const ChainMap<K>& f)
{
    return chain_map(s.cx, t.cx, [&](int n) {
        return tensor_piece(s.parts, s.cx, t.parts, t.cx, s.bdim, n, n, f.at(n));
    });
}

template <class K>
Homotopy<K> tensor_homotopy(const TensorComplex<K>& s, const TensorComplex<K>& t, const Homotopy<K>& h)
{
    Homotopy<K> out{s.cx, t.cx, {}};
    for (int n = s.cx.lo(); n <= s.cx.hi(); ++n)
        out.comps.push_back(tensor_piece(s.parts, s.cx, t.parts, t.cx, s.bdim, n, n - 1, h.at(n)));
    return out;
}

template <class K>
InducedComplex<K> induce_complex(const AlgebraMorphism<K>& f, const Complex<K>& x)
{
    if (f.source != x.alg())
        throw InputError("induce_complex: complex is not over the source of '" + f.name + "'");
    InducedComplex<K> out;
    std::vector<Module<K>> terms;
    for (int n = x.lo(); n <= x.hi(); ++n) {
        out.parts.push_back(induce(f, x.term(n)));
        terms.push_back(out.parts.back().module());
    }
    std::vector<Mat<K>> diffs;
    const Mat<K> id = eye(x.field(), f.target->dim());
    for (int n = x.lo(); n < x.hi(); ++n) {
        const auto k = static_cast<std::size_t>(n - x.lo());
        diffs.push_back(tensor_map(out.parts[k].tm, out.parts[k + 1].tm, id, x.d(n)));
    }
    out.cx = x.empty() ? zero_complex(f.target) : Complex<K>(f.target, x.lo(), std::move(terms), std::move(diffs));
    return out;
}

template <class K>
ChainMap<K> induce_chain_map(const InducedComplex<K>& s, const InducedComplex<K>& t, const ChainMap<K>& f)
{
    const auto sp = tms(s.parts), tp = tms(t.parts);
    const Index bdim = s.cx.alg()->dim();
    return chain_map(s.cx, t.cx, [&](int n) { return tensor_piece(sp, s.cx, tp, t.cx, bdim, n, n, f.at(n)); });
}

template <class K>
Homotopy<K> induce_homotopy(const InducedComplex<K>& s, const InducedComplex<K>& t, const Homotopy<K>& h)
{
    const auto sp = tms(s.parts), tp = tms(t.parts);
    const Index bdim = s.cx.alg()->dim();
    Homotopy<K> out{s.cx, t.cx, {}};
    for (int n = s.cx.lo(); n <= s.cx.hi(); ++n)
        out.comps.push_back(tensor_piece(sp, s.cx, tp, t.cx, bdim, n, n - 1, h.at(n)));
    return out;
}

template <class K>
bool is_projective_complex(const Complex<K>& x)
{
    for (const auto& t : x.terms())
        if (t.dim() > 0 && !is_projective(t).projective)
            return false;
    return true;
}

template <class K>
bool is_minimal(const Complex<K>& x)
{
    for (int n = x.lo(); n < x.hi(); ++n) {
        const Mat<K> d = x.d(n);
        if (d.size() == 0 || is_zero<K>(d))
            continue;
        if (!radical_submodule(x.term(n + 1)).contains(d))
            return false;
    }
    return true;
}

namespace {

struct Block
{
    Index offset = 0, size = 0;
};

template <class K>
std::vector<Index> indices_except(Index n, const Block& b)
{
    std::vector<Index> out;
    for (Index i = 0; i < n; ++i)
        if (i < b.offset || i >= b.offset + b.size)
            out.push_back(i);
    return out;
}

} // namespace

template <class K>
Minimization<K> minimize(const Complex<K>& p)
{
    const auto& a = p.alg();
    const Field<K>& f = p.field();
    if (!a->has_radical() || !a->has_idempotents())
        throw InputError("minimize: the algebra needs a radical and primitive idempotents");
    if (p.empty())
        return {p, identity_map(p), identity_map(p), zero_homotopy(p, p), 0};
    const int lo = p.lo(), hi = p.hi();
    const auto len = static_cast<std::size_t>(hi - lo + 1);
    // Current complex C in summand coordinates, with C -> P, P -> C and the homotopy on P.
    std::vector<Module<K>> terms(len);
    std::vector<Mat<K>> diffs(len), iota(len), rho(len), h(len);
    std::vector<std::vector<Block>> blocks(len);
    const auto& info = a->idempotents();
    for (std::size_t k = 0; k < len; ++k) {
        const Module<K> pk = p.terms()[k];
        if (pk.dim() == 0) {
            terms[k] = pk;
            iota[k] = rho[k] = zeros(f, 0, 0);
            continue;
        }
        ProjectiveCover<K> pc = projective_cover(pk);
        auto inv = inverse<K>(pc.map);
        if (pc.projective.dim() != pk.dim() || !inv)
            throw InputError("minimize: term in degree " + std::to_string(lo + static_cast<int>(k)) +
                             " is not projective");
        terms[k] = pc.projective;
        iota[k] = pc.map;
        rho[k] = *inv;
        Index at = 0;
        for (Index s : pc.summands) {
            const Index sz = rank<K>(a->right_mult(info.idems[static_cast<std::size_t>(s)]));
            blocks[k].push_back({at, sz});
            at += sz;
        }
    }
    for (std::size_t k = 0; k < len; ++k) {
        const int n = lo + static_cast<int>(k);
        h[k] = zeros(f, p.dim(n - 1), p.dim(n));
        if (k + 1 < len)
            diffs[k] = Mat<K>(rho[k + 1] * p.d(n) * iota[k]);
    }
    int cancelled = 0;
    for (;;) {
        bool found = false;
        std::size_t kk = 0, si = 0, ti = 0;
        Mat<K> phi;
        for (std::size_t k = 0; k + 1 < len && !found; ++k)
            for (std::size_t s = 0; s < blocks[k].size() && !found; ++s)
                for (std::size_t t = 0; t < blocks[k + 1].size() && !found; ++t) {
                    const Block& bs = blocks[k][s];
                    const Block& bt = blocks[k + 1][t];
                    if (bs.size != bt.size)
                        continue;
                    Mat<K> c = diffs[k].block(bt.offset, bs.offset, bt.size, bs.size);
                    if (is_invertible<K>(c)) {
                        found = true;
                        kk = k;
                        si = s;
                        ti = t;
                        phi = c;
                    }
                }
        if (!found)
            break;
        const std::size_t k = kk;
        const Block b1 = blocks[k][si], b2 = blocks[k + 1][ti];
        const Index n0 = terms[k].dim(), n1 = terms[k + 1].dim();
        std::vector<Index> r1(static_cast<std::size_t>(b1.size)), r2(static_cast<std::size_t>(b2.size));
        for (Index i = 0; i < b1.size; ++i)
            r1[static_cast<std::size_t>(i)] = b1.offset + i;
        for (Index i = 0; i < b2.size; ++i)
            r2[static_cast<std::size_t>(i)] = b2.offset + i;
        const Mat<K> B0 = select(f, n0, r1), B1 = select(f, n1, r2);
        const Mat<K> E0 = select(f, n0, indices_except<K>(n0, b1)), E1 = select(f, n1, indices_except<K>(n1, b2));
        const Mat<K>& D = diffs[k];
        const Mat<K> phinv = *inverse<K>(phi);
        const Mat<K> delta = B1.transpose() * D * E0;
        const Mat<K> gamma = E1.transpose() * D * B0;
        const Mat<K> eps = E1.transpose() * D * E0;
        // Small complex and the comparison maps.
        const Mat<K> iota0 = E0 - B0 * phinv * delta;
        const Mat<K> rho1 = E1.transpose() - gamma * phinv * B1.transpose();
        const Mat<K> hh = B0 * phinv * B1.transpose();
        h[k + 1] = Mat<K>(h[k + 1] + iota[k] * hh * rho[k + 1]);
        iota[k] = Mat<K>(iota[k] * iota0);
        iota[k + 1] = Mat<K>(iota[k + 1] * E1);
        rho[k] = Mat<K>(E0.transpose() * rho[k]);
        rho[k + 1] = Mat<K>(rho1 * rho[k + 1]);
        diffs[k] = Mat<K>(eps - gamma * phinv * delta);
        if (k > 0)
            diffs[k - 1] = Mat<K>(E0.transpose() * diffs[k - 1]);
        if (k + 2 < len)
            diffs[k + 1] = Mat<K>(diffs[k + 1] * E1);
        terms[k] = restrict_to(terms[k], E0);
        terms[k + 1] = restrict_to(terms[k + 1], E1);
        auto shrink = [](std::vector<Block>& bl, std::size_t gone) {
            const Index sz = bl[gone].size;
            bl.erase(bl.begin() + static_cast<std::ptrdiff_t>(gone));
            for (std::size_t i = gone; i < bl.size(); ++i)
                bl[i].offset -= sz;
        };
        shrink(blocks[k], si);
        shrink(blocks[k + 1], ti);
        ++cancelled;
    }
    std::vector<Mat<K>> ds;
    for (std::size_t k = 0; k + 1 < len; ++k)
        ds.push_back(diffs[k]);
    Complex<K> full(a, lo, terms, ds);
    Minimization<K> out;
    out.q = trim(full);
    out.cancelled = cancelled;
    out.iota = chain_map(out.q, p, [&](int n) { return iota[static_cast<std::size_t>(n - lo)]; });
    out.rho = chain_map(p, out.q, [&](int n) {
        return out.q.contains(n) ? rho[static_cast<std::size_t>(n - lo)] : zeros(f, 0, p.dim(n));
    });
    out.h = Homotopy<K>{p, p, h};
    if (!is_chain_map(out.iota) || !is_chain_map(out.rho))
        throw HardFailure("minimize: comparison maps are not chain maps");
    if (!(compose(out.rho, out.iota) == identity_map(out.q)))
        throw HardFailure("minimize: rho iota is not the identity");
    if (!is_homotopy(identity_map(p), compose(out.iota, out.rho), out.h))
        throw HardFailure("minimize: homotopy witness for iota rho fails");
    if (!is_minimal(out.q))
        throw HardFailure("minimize: fixpoint is not minimal");
    return out;
}

template <class K>
Resolution<K> resolve_bounded(const Complex<K>& x, int depth)
{
    if (depth < 0)
        throw InputError("resolve_bounded: negative depth");
    if (x.empty() || is_projective_complex(x))
        return {x, identity_map(x)};
    const auto& a = x.alg();
    const Field<K>& f = x.field();
    auto cover = [&](const Module<K>& w) -> std::pair<Module<K>, Mat<K>> {
        if (a->has_idempotents()) {
            ProjectiveCover<K> pc = projective_cover(w);
            return {pc.projective, pc.map};
        }
        FreeCover<K> fc = free_cover(w, greedy_generators(w));
        return {fc.free, fc.map};
    };
    // Built from the top down: terms[i], d[i]: P^n -> P^{n+1}, eps[i]: P^n -> X^n for n = hi - i.
    std::vector<Module<K>> terms;
    std::vector<Mat<K>> dd, eps;
    Module<K> above = zero_module(a), above2 = zero_module(a);
    Mat<K> d_above = zeros(f, 0, 0), eps_above = zeros(f, x.dim(x.hi() + 1), 0);
    int n = x.hi();
    for (;; --n) {
        const Module<K> xn = x.term(n);
        // W = {(y, x) in P^{n+1} (+) X^n : d y = 0, eps y = d x}.
        DirectSum<K> s = direct_sum<K>({above, xn});
        DirectSum<K> t = direct_sum<K>({above2, x.term(n + 1)});
        Mat<K> m = zeros(f, t.module.dim(), s.module.dim());
        const Index a1 = above.dim(), a2 = above2.dim();
        m.block(0, 0, a2, a1) = d_above;
        m.block(a2, 0, x.dim(n + 1), a1) = eps_above;
        m.block(a2, a1, x.dim(n + 1), xn.dim()) = -x.d(n);
        SubModule<K> w = kernel(ModuleMorphism<K>{s.module, t.module, m});
        if (n < x.lo()) {
            if (w.module.dim() == 0)
                break;
            const int reach = x.lo() - n;
            if (reach > depth || (!is_projective(w.module).projective && reach == depth))
                throw HardFailure("pd bound exceeded at depth " + std::to_string(depth));
            if (is_projective(w.module).projective) {
                terms.push_back(w.module);
                dd.push_back(Mat<K>(w.inclusion.topRows(a1)));
                eps.push_back(zeros(f, 0, w.module.dim()));
                --n;
                break;
            }
        }
        auto [pn, pi] = cover(w.module);
        Mat<K> lift = w.inclusion * pi;
        terms.push_back(pn);
        dd.push_back(Mat<K>(lift.topRows(a1)));
        eps.push_back(Mat<K>(lift.bottomRows(xn.dim())));
        above2 = above;
        above = pn;
        d_above = dd.back();
        eps_above = eps.back();
    }
    const int lo = n + 1;
    std::reverse(terms.begin(), terms.end());
    std::reverse(dd.begin(), dd.end());
    std::reverse(eps.begin(), eps.end());
    // dd[i] now maps P^{lo+i} -> P^{lo+i+1}; the top one maps into 0.
    std::vector<Mat<K>> diffs(dd.begin(), dd.end() - 1);
    Resolution<K> out;
    out.p = Complex<K>(a, lo, terms, diffs);
    out.eps = chain_map(out.p, x, [&](int k) { return eps[static_cast<std::size_t>(k - lo)]; });
    if (!is_chain_map(out.eps) || !is_quasi_iso(out.eps))
        throw HardFailure("resolve_bounded: the comparison map is not a quasi-isomorphism");
    return out;
}

#define PHL_INSTANTIATE_CHAINCX(K)                                                                          \
    template class Complex<K>;                                                                              \
    template struct GradedHom<K>;                                                                           \
    template struct HomotopyHom<K>;                                                                         \
    template Complex<K> zero_complex<K>(const AlgebraPtr<K>&);                                              \
    template Complex<K> stalk<K>(const Module<K>&, int);                                                    \
    template Complex<K> trim<K>(const Complex<K>&);                                                         \
    template Complex<K> complex_sum<K>(const Complex<K>&, const Complex<K>&);                               \
    template bool is_acyclic<K>(const Complex<K>&);                                                         \
    template struct ChainMap<K>;                                                                            \
    template struct Homotopy<K>;                                                                            \
    template bool is_chain_map<K>(const ChainMap<K>&);                                                      \
    template ChainMap<K> identity_map<K>(const Complex<K>&);                                                \
    template ChainMap<K> zero_map<K>(const Complex<K>&, const Complex<K>&);                                 \
    template ChainMap<K> compose<K>(const ChainMap<K>&, const ChainMap<K>&);                                \
    template ChainMap<K> operator+ <K>(const ChainMap<K>&, const ChainMap<K>&);                             \
    template ChainMap<K> operator- <K>(const ChainMap<K>&, const ChainMap<K>&);                             \
    template ChainMap<K> scale<K>(const K&, const ChainMap<K>&);                                            \
    template bool operator== <K>(const ChainMap<K>&, const ChainMap<K>&);                                   \
    template bool is_chain_iso<K>(const ChainMap<K>&);                                                      \
    template Homotopy<K> zero_homotopy<K>(const Complex<K>&, const Complex<K>&);                            \
    template ChainMap<K> boundary<K>(const Homotopy<K>&);                                                   \
    template bool is_homotopy<K>(const ChainMap<K>&, const ChainMap<K>&, const Homotopy<K>&);               \
    template Homotopy<K> sandwich<K>(const ChainMap<K>&, const Homotopy<K>&, const ChainMap<K>&);           \
    template Homotopy<K> operator+ <K>(const Homotopy<K>&, const Homotopy<K>&);                             \
    template Homology<K> homology<K>(const Complex<K>&, int);                                               \
    template Mat<K> homology_map<K>(const ChainMap<K>&, int);                                               \
    template bool is_quasi_iso<K>(const ChainMap<K>&);                                                      \
    template Complex<K> cone<K>(const ChainMap<K>&);                                                        \
    template Vec<K> flatten<K>(const Field<K>&, const std::vector<Mat<K>>&);                                \
    template GradedHom<K> graded_hom<K>(const Complex<K>&, const Complex<K>&, int);                         \
    template Mat<K> chain_condition<K>(const GradedHom<K>&);                                                \
    template Mat<K> boundary_matrix<K>(const GradedHom<K>&);                                                \
    template Mat<K> embed_matrix<K>(const GradedHom<K>&);                                                   \
    template HomotopyHom<K> homotopy_hom<K>(const Complex<K>&, const Complex<K>&);                          \
    template std::optional<Homotopy<K>> null_homotopy_witness<K>(const ChainMap<K>&);                       \
    template std::optional<HomotopyInverse<K>> homotopy_inverse<K>(const ChainMap<K>&);                     \
    template TensorComplex<K> tensor_complex<K>(const Bimodule<K>&, const Complex<K>&);                     \
    template ChainMap<K> tensor_chain_map<K>(const TensorComplex<K>&, const TensorComplex<K>&,              \
                                             const ChainMap<K>&);                                           \
    template Homotopy<K> tensor_homotopy<K>(const TensorComplex<K>&, const TensorComplex<K>&,               \
                                            const Homotopy<K>&);                                            \
    template InducedComplex<K> induce_complex<K>(const AlgebraMorphism<K>&, const Complex<K>&);             \
    template ChainMap<K> induce_chain_map<K>(const InducedComplex<K>&, const InducedComplex<K>&,            \
                                             const ChainMap<K>&);                                           \
    template Homotopy<K> induce_homotopy<K>(const InducedComplex<K>&, const InducedComplex<K>&,             \
                                            const Homotopy<K>&);                                            \
    template bool is_projective_complex<K>(const Complex<K>&);                                              \
    template bool is_minimal<K>(const Complex<K>&);                                                         \
    template Minimization<K> minimize<K>(const Complex<K>&);                                                \
    template Resolution<K> resolve_bounded<K>(const Complex<K>&, int);

PHL_INSTANTIATE_CHAINCX(Rational)
PHL_INSTANTIATE_CHAINCX(Fp)

} // namespace phl
