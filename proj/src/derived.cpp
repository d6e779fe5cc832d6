#include "phl/derived.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace phl {

namespace {

template <class K>
Mat<K> basis_of(const Field<K>& f, const Subspace<K>& s)
{
    return s.dim() == 0 ? zeros(f, s.ambient(), 0) : s.basis();
}

template <class K>
Vec<K> concat(const Field<K>& f, const Vec<K>& a, const Vec<K>& b)
{
    Vec<K> v = zeros(f, a.size() + b.size(), 1);
    if (a.size() > 0)
        v.head(a.size()) = a;
    if (b.size() > 0)
        v.tail(b.size()) = b;
    return v;
}

template <class K>
bool same_shape(const Complex<K>& x, const Complex<K>& y)
{
    if (x.alg() != y.alg())
        return false;
    const int lo = std::min(x.lo(), y.lo()), hi = std::max(x.hi(), y.hi());
    for (int n = lo; n <= hi; ++n)
        if (x.dim(n) != y.dim(n))
            return false;
    return true;
}

/// The same maps viewed between other (identically shaped) complexes.
template <class K>
ChainMap<K> rebind(const ChainMap<K>& f, const Complex<K>& x, const Complex<K>& y)
{
    return chain_map(x, y, [&](int n) { return f.at(n); });
}

template <class K>
bool rprime_right_projective(const PullbackData<K>& d)
{
    Bimodule<K> rp = algebra_bimodule(d.pi1, d.pi2);
    Module<K> right(opposite(d.R2()), rp.dim, rp.ract);
    return is_projective(right).projective;
}

template <class K>
Subspace<K> algebra_radical(const Algebra<K>& a)
{
    return a.has_radical() ? a.radical().space : radical(a);
}

template <class K>
std::string dims_of(const Complex<K>& x)
{
    if (x.empty())
        return "0";
    std::ostringstream s;
    s << "[" << x.lo() << ":";
    for (int n = x.lo(); n <= x.hi(); ++n)
        s << (n == x.lo() ? " " : ",") << x.dim(n);
    s << "]";
    return s.str();
}

template <class K>
Vec<K> random_vector(const Field<K>& f, Index n, std::mt19937_64& rng)
{
    Vec<K> v = zeros(f, n, 1);
    for (Index i = 0; i < n; ++i)
        v(i) = f.random(rng, 1);
    return v;
}

/// R_i (x) g - f_i as the compatibility of a preimage.
template <class K>
bool preimage_holds(const DIndResult<K>& p, const DIndResult<K>& q, const Preimage<K>& w, const ChainMap<K>& f1,
                    const ChainMap<K>& f2)
{
    return is_chain_map(w.g) && is_homotopy(induce_chain_map(p.leg1, q.leg1, w.g), f1, w.h1) &&
           is_homotopy(induce_chain_map(p.leg2, q.leg2, w.g), f2, w.h2);
}

/// The linear system R_i (x) g - d h_i - h_i d in unknowns (g, h1, h2), with g
/// in cycle coordinates.
template <class K>
struct LegSystem
{
    HomotopyHom<K> hom;
    GradedHom<K> k1, k2;
    Mat<K> sys;
    Index rows1 = 0, rows2 = 0;
};

template <class K>
LegSystem<K> leg_system(const DIndResult<K>& p, const DIndResult<K>& q)
{
    const Field<K>& f = p.p.field();
    LegSystem<K> s{homotopy_hom(p.p, q.p), graded_hom(p.leg1.cx, q.leg1.cx, -1),
                   graded_hom(p.leg2.cx, q.leg2.cx, -1), {}, 0, 0};
    const Index ng = s.hom.cycles.dim(), n1 = s.k1.dim, n2 = s.k2.dim;
    s.rows1 = flat_size(p.leg1.cx, q.leg1.cx, 0);
    s.rows2 = flat_size(p.leg2.cx, q.leg2.cx, 0);
    s.sys = zeros(f, s.rows1 + s.rows2, ng + n1 + n2);
    const Mat<K> cyc = basis_of(f, s.hom.cycles);
    if (ng > 0) {
        s.sys.block(0, 0, s.rows1 + s.rows2, ng) = op_matrix(f, ng, s.rows1 + s.rows2, [&](const Vec<K>& c) {
            ChainMap<K> g = s.hom.from_maps_coords(Vec<K>(cyc * c));
            return concat(f, flatten(f, induce_chain_map(p.leg1, q.leg1, g).comps),
                          flatten(f, induce_chain_map(p.leg2, q.leg2, g).comps));
        });
    }
    if (n1 > 0)
        s.sys.block(0, ng, s.rows1, n1) = -boundary_matrix(s.k1);
    if (n2 > 0)
        s.sys.block(s.rows1, ng + n1, s.rows2, n2) = -boundary_matrix(s.k2);
    return s;
}

template <class K>
Preimage<K> leg_solution(const DIndResult<K>& p, const DIndResult<K>& q, const LegSystem<K>& s, const Vec<K>& x)
{
    const Field<K>& f = p.p.field();
    const Index ng = s.hom.cycles.dim(), n1 = s.k1.dim, n2 = s.k2.dim;
    Preimage<K> out{s.hom.from_maps_coords(Vec<K>(basis_of(f, s.hom.cycles) * Vec<K>(x.segment(0, ng)))),
                    Homotopy<K>{p.leg1.cx, q.leg1.cx, s.k1.element(Vec<K>(x.segment(ng, n1)))},
                    Homotopy<K>{p.leg2.cx, q.leg2.cx, s.k2.element(Vec<K>(x.segment(ng + n1, n2)))}};
    return out;
}

struct Stats
{
    std::size_t count = 0;
};

} // namespace

template <class K>
DerivedTriple<K> make_derived_triple(const PullbackData<K>& d, const Complex<K>& p1, const Complex<K>& p2,
                                     const ChainMap<K>& c)
{
    if (p1.alg() != d.R1() || p2.alg() != d.R2())
        throw InputError("derived triple: legs are not over R1 and R2");
    DerivedTriple<K> t{d, p1, p2, induce_complex(d.pi1, p1), induce_complex(d.pi2, p2), {}};
    if (!same_shape(c.source, t.ind1.cx) || !same_shape(c.target, t.ind2.cx))
        throw InputError("derived triple: c does not go R' (x) P1 -> R' (x) P2");
    t.c = rebind(c, t.ind1.cx, t.ind2.cx);
    if (!is_chain_map(t.c))
        throw InputError("derived triple: c is not a chain map of R'-complexes");
    return t;
}

template <class K>
DerivedTriple<K> zero_derived_triple(const PullbackData<K>& d)
{
    Complex<K> z1 = zero_complex(d.R1()), z2 = zero_complex(d.R2());
    DerivedTriple<K> t{d, z1, z2, induce_complex(d.pi1, z1), induce_complex(d.pi2, z2), {}};
    t.c = zero_map(t.ind1.cx, t.ind2.cx);
    return t;
}

template <class K>
bool is_gluing(const DerivedTriple<K>& t)
{
    return is_quasi_iso(t.c);
}

template <class K>
ChainMap<K> push1(const DerivedTriple<K>& s, const DerivedTriple<K>& t, const ChainMap<K>& f1)
{
    return induce_chain_map(s.ind1, t.ind1, f1);
}

template <class K>
ChainMap<K> push2(const DerivedTriple<K>& s, const DerivedTriple<K>& t, const ChainMap<K>& f2)
{
    return induce_chain_map(s.ind2, t.ind2, f2);
}

namespace {

template <class K>
ChainMap<K> dtr_compat(const DerivedTriple<K>& s, const DerivedTriple<K>& t, const ChainMap<K>& f1,
                       const ChainMap<K>& f2)
{
    return compose(t.c, push1(s, t, f1)) - compose(push2(s, t, f2), s.c);
}

} // namespace

template <class K>
bool is_dtr_morphism(const DerivedTriple<K>& s, const DerivedTriple<K>& t, const DTrMorphism<K>& m)
{
    if (!is_chain_map(m.f1) || !is_chain_map(m.f2))
        return false;
    if (!same_shape(m.f1.source, s.p1) || !same_shape(m.f1.target, t.p1) || !same_shape(m.f2.source, s.p2) ||
        !same_shape(m.f2.target, t.p2))
        return false;
    ChainMap<K> lhs = dtr_compat(s, t, rebind(m.f1, s.p1, t.p1), rebind(m.f2, s.p2, t.p2));
    Homotopy<K> w{s.ind1.cx, t.ind2.cx, {}};
    for (int n = s.ind1.cx.lo(); n <= s.ind1.cx.hi(); ++n)
        w.comps.push_back(m.witness.at(n));
    return is_homotopy(lhs, zero_map(s.ind1.cx, t.ind2.cx), w);
}

template <class K>
std::optional<DTrMorphism<K>> dtr_morphism(const DerivedTriple<K>& s, const DerivedTriple<K>& t,
                                           const ChainMap<K>& f1, const ChainMap<K>& f2)
{
    ChainMap<K> a = rebind(f1, s.p1, t.p1), b = rebind(f2, s.p2, t.p2);
    if (!is_chain_map(a) || !is_chain_map(b))
        throw InputError("dtr_morphism: legs are not chain maps");
    auto w = null_homotopy_witness(dtr_compat(s, t, a, b));
    if (!w)
        return std::nullopt;
    return DTrMorphism<K>{a, b, *w};
}

template <class K>
DTrMorphism<K> compose(const DerivedTriple<K>& a, const DerivedTriple<K>& b, const DerivedTriple<K>& c,
                       const DTrMorphism<K>& g, const DTrMorphism<K>& f)
{
    // c'' R'(g1 f1) - R'(g2 f2) c = B(w_g) R'f1 + R'g2 B(w_f).
    DTrMorphism<K> out{compose(g.f1, f.f1), compose(g.f2, f.f2), {}};
    out.witness = sandwich(identity_map(c.ind2.cx), g.witness, push1(a, b, f.f1)) +
                  sandwich(push2(b, c, g.f2), f.witness, identity_map(a.ind1.cx));
    if (!is_dtr_morphism(a, c, out))
        throw HardFailure("composite of derived-triple morphisms fails its witness");
    return out;
}

template <class K>
DIndResult<K> ind_L(const PullbackData<K>& d, const Complex<K>& p)
{
    if (p.alg() != d.R())
        throw InputError("ind_L: complex is not over R");
    for (int n = p.lo(); n <= p.hi(); ++n)
        if (p.dim(n) > 0 && !is_projective(p.term(n)).projective)
            throw HypothesisRefused("ind_L: term in degree " + std::to_string(n) +
                                    " is not projective (resolve the complex first)");
    DIndResult<K> out{p, induce_complex(d.i1, p), induce_complex(d.i2, p), {}};
    DerivedTriple<K> t{d, out.leg1.cx, out.leg2.cx, induce_complex(d.pi1, out.leg1.cx),
                       induce_complex(d.pi2, out.leg2.cx), {}};
    t.c = chain_map(t.ind1.cx, t.ind2.cx, [&](int n) { return ind(d, p.term(n)).triple.c; });
    if (!is_chain_map(t.c) || !is_chain_iso(t.c))
        throw HardFailure("ind_L: can is not a chain isomorphism");
    out.triple = std::move(t);
    return out;
}

template <class K>
DTrMorphism<K> ind_L_map(const DIndResult<K>& s, const DIndResult<K>& t, const ChainMap<K>& g)
{
    DTrMorphism<K> m{induce_chain_map(s.leg1, t.leg1, g), induce_chain_map(s.leg2, t.leg2, g),
                     zero_homotopy(s.triple.ind1.cx, t.triple.ind2.cx)};
    if (!is_dtr_morphism(s.triple, t.triple, m))
        throw HardFailure("ind_L(g) is not strictly compatible with can");
    return m;
}

template <class K>
PairHom<K> pair_hom(const Complex<K>& x1, const Complex<K>& y1, const Complex<K>& x2, const Complex<K>& y2,
                    const Complex<K>& wsrc, const Complex<K>& wtgt,
                    std::function<ChainMap<K>(const ChainMap<K>&, const ChainMap<K>&)> compat)
{
    const Field<K>& f = x1.field();
    PairHom<K> out;
    out.h1 = homotopy_hom(x1, y1);
    out.h2 = homotopy_hom(x2, y2);
    out.w = graded_hom(wsrc, wtgt, -1);
    out.compat = std::move(compat);
    const Index n1 = out.h1.cycles.dim(), n2 = out.h2.cycles.dim(), nw = out.w.dim;
    const Index m1 = out.h1.maps.dim, m2 = out.h2.maps.dim;
    const Index rows = flat_size(wsrc, wtgt, 0);
    const Mat<K> c1 = basis_of(f, out.h1.cycles), c2 = basis_of(f, out.h2.cycles);
    // Unknowns (alpha, beta, w): compat(f1(alpha), f2(beta)) - d w - w d = 0.
    Mat<K> sys = zeros(f, rows, n1 + n2 + nw);
    const ChainMap<K> z1 = zero_map(x1, y1), z2 = zero_map(x2, y2);
    if (n1 > 0)
        sys.leftCols(n1) = op_matrix(f, n1, rows, [&](const Vec<K>& c) {
            return flatten(f, out.compat(out.h1.from_maps_coords(Vec<K>(c1 * c)), z2).comps);
        });
    if (n2 > 0)
        sys.middleCols(n1, n2) = op_matrix(f, n2, rows, [&](const Vec<K>& c) {
            return flatten(f, out.compat(z1, out.h2.from_maps_coords(Vec<K>(c2 * c))).comps);
        });
    if (nw > 0)
        sys.rightCols(nw) = -boundary_matrix(out.w);
    Subspace<K> sol = Subspace<K>::kernel(sys, f.one());
    Mat<K> lift = zeros(f, m1 + m2, n1 + n2 + nw);
    if (n1 > 0)
        lift.block(0, 0, m1, n1) = c1;
    if (n2 > 0)
        lift.block(m1, n1, m2, n2) = c2;
    const Mat<K> sb = basis_of(f, sol);
    const Mat<K> lifted = lift * sb;
    out.pairs = Subspace<K>::span(lifted, m1 + m2);
    out.witnesses = zeros(f, nw, out.pairs.dim());
    if (out.pairs.dim() > 0) {
        auto coef = solve_particular<K>(lifted, out.pairs.basis());
        if (!coef)
            throw HardFailure("pair_hom: compatible pair without a solution of the joint system");
        if (nw > 0)
            out.witnesses = Mat<K>(sb.bottomRows(nw) * *coef);
    }
    Mat<K> nulls = zeros(f, m1 + m2, out.h1.bounds.dim() + out.h2.bounds.dim());
    if (out.h1.bounds.dim() > 0)
        nulls.block(0, 0, m1, out.h1.bounds.dim()) = out.h1.bounds.basis();
    if (out.h2.bounds.dim() > 0)
        nulls.block(m1, out.h1.bounds.dim(), m2, out.h2.bounds.dim()) = out.h2.bounds.basis();
    out.null_pairs = Subspace<K>::span(nulls, m1 + m2);
    if (!out.pairs.contains(out.null_pairs))
        throw HardFailure("pair_hom: a pair of null-homotopic maps is not compatible");
    Mat<K> rel = out.null_pairs.dim() == 0 ? zeros(f, out.pairs.dim(), 0)
                                           : Mat<K>(out.pairs.coords(out.null_pairs.basis()));
    out.classes = Quotient<K>(Subspace<K>::span(rel, out.pairs.dim()), f.one());
    return out;
}

template <class K>
std::tuple<ChainMap<K>, ChainMap<K>, Homotopy<K>> PairHom<K>::element(Index k) const
{
    Vec<K> v = pairs.basis() * classes.section().col(k);
    ChainMap<K> a = h1.from_maps_coords(Vec<K>(v.head(h1.maps.dim)));
    ChainMap<K> b = h2.from_maps_coords(Vec<K>(v.tail(h2.maps.dim)));
    Homotopy<K> h{w.source, w.target, w.element(Vec<K>(witnesses * classes.section().col(k)))};
    if (!is_homotopy(compat(a, b), zero_map(h.source, h.target), h))
        throw HardFailure("pair_hom: stored compatibility witness fails");
    return {a, b, h};
}

template <class K>
Vec<K> PairHom<K>::class_of(const ChainMap<K>& f1, const ChainMap<K>& f2) const
{
    const Field<K>& f = h1.maps.source.field();
    Vec<K> c = concat(f, h1.maps.coords(f1.comps), h2.maps.coords(f2.comps));
    if (!pairs.contains(Mat<K>(c)))
        throw InputError("pair_hom: pair is not compatible up to homotopy");
    return Vec<K>(classes.project() * pairs.coords(Mat<K>(c)));
}

template <class K>
DTrMorphism<K> DtrHom<K>::element(Index k) const
{
    auto [a, b, w] = pairs.element(k);
    return DTrMorphism<K>{a, b, w};
}

template <class K>
std::vector<DTrMorphism<K>> DtrHom<K>::basis() const
{
    std::vector<DTrMorphism<K>> out;
    for (Index k = 0; k < dim(); ++k)
        out.push_back(element(k));
    return out;
}

template <class K>
DtrHom<K> dtr_hom(const DerivedTriple<K>& s, const DerivedTriple<K>& t)
{
    auto compat = [s, t](const ChainMap<K>& f1, const ChainMap<K>& f2) { return dtr_compat(s, t, f1, f2); };
    return DtrHom<K>{s, t, pair_hom<K>(s.p1, t.p1, s.p2, t.p2, s.ind1.cx, t.ind2.cx, compat)};
}

template <class K>
CommaObject<K> psi_view(const GammaComplex<K>& g)
{
    const GammaRing<K>& r = *g.ring;
    const auto& d = r.data;
    std::vector<Module<K>> t1, t2;
    std::vector<Mat<K>> d1, d2;
    for (const auto& m : g.terms) {
        t1.push_back(m.x1);
        t2.push_back(m.x2);
    }
    if (g.diffs.size() + 1 != g.terms.size() && !g.terms.empty())
        throw InputError("psi_view: expected one differential between consecutive terms");
    for (const auto& [a2, a1] : g.diffs) {
        d2.push_back(a2);
        d1.push_back(a1);
    }
    CommaObject<K> out;
    out.ring = g.ring;
    out.x1 = g.terms.empty() ? zero_complex(d.R1()) : Complex<K>(d.R1(), g.lo, std::move(t1), std::move(d1));
    out.x2 = g.terms.empty() ? zero_complex(d.R2()) : Complex<K>(d.R2(), g.lo, std::move(t2), std::move(d2));
    out.dx1 = tensor_complex(r.dual.bimodule, out.x1);
    out.phi = chain_map(out.dx1.cx, out.x2,
                        [&](int n) { return g.terms[static_cast<std::size_t>(n - g.lo)].phi; });
    if (!is_chain_map(out.phi))
        throw InputError("psi_view: differentials do not commute with the structure morphisms");
    return out;
}

template <class K>
CommaObject<K> dphi(const GammaRingPtr<K>& ring, const DerivedTriple<K>& t)
{
    const GammaRing<K>& r = *ring;
    if (!r.rprime_projective)
        throw HypothesisRefused("R' is not finitely generated projective as a right R2-module");
    const auto& d = t.data;
    if (t.p1.alg() != r.data.R1() || t.p2.alg() != r.data.R2())
        throw InputError("dphi: triple is over a different diagram");
    CommaObject<K> out{ring, t.p1, t.p2, tensor_complex(r.dual.bimodule, t.p1), {}};
    out.phi = chain_map(out.dx1.cx, out.x2, [&](int n) {
        return phi(ring, make_triple(d, t.p1.term(n), t.p2.term(n), t.c.at(n))).phi;
    });
    if (!is_chain_map(out.phi))
        throw HardFailure("DPhi: degreewise structure morphisms do not form a chain map");
    return out;
}

template <class K>
PairHom<K> comma_hom(const CommaObject<K>& s, const CommaObject<K>& t)
{
    auto compat = [s, t](const ChainMap<K>& a, const ChainMap<K>& b) {
        return compose(t.phi, tensor_chain_map(s.dx1, t.dx1, a)) - compose(b, s.phi);
    };
    return pair_hom<K>(s.x1, t.x1, s.x2, t.x2, s.dx1.cx, t.x2, compat);
}

template <class K>
Diagnostics dphi_hom_check(const GammaRingPtr<K>& ring, const DerivedTriple<K>& s, const DerivedTriple<K>& t)
{
    Diagnostics out;
    DtrHom<K> h = dtr_hom(s, t);
    PairHom<K> c = comma_hom(dphi(ring, s), dphi(ring, t));
    out.note("dim Hom_DTr = " + std::to_string(h.dim()) + ", dim Hom_comma = " + std::to_string(c.dim()));
    if (h.dim() != c.dim())
        out.fail("DPhi changes the Hom dimension: " + std::to_string(h.dim()) + " vs " + std::to_string(c.dim()));
    // DPhi is the identity on legs, so the basis must map to independent classes.
    const Field<K>& f = s.p1.field();
    Mat<K> img = zeros(f, c.dim(), h.dim());
    for (Index k = 0; k < h.dim(); ++k) {
        DTrMorphism<K> m = h.element(k);
        try {
            img.col(k) = c.class_of(m.f1, m.f2);
        } catch (const InputError&) {
            out.fail("basis morphism " + std::to_string(k) + " is not a comma-category morphism");
            return out;
        }
    }
    if (h.dim() > 0 && rank<K>(img) != h.dim())
        out.fail("DPhi is not injective on Hom");
    return out;
}

template <class K>
std::vector<Preimage<K>> fullness_witnesses(const DIndResult<K>& p, const DIndResult<K>& q,
                                            const std::vector<DTrMorphism<K>>& ms)
{
    const Field<K>& f = p.p.field();
    std::vector<Preimage<K>> out;
    if (ms.empty())
        return out;
    LegSystem<K> s = leg_system(p, q);
    Mat<K> rhs = zeros(f, s.sys.rows(), static_cast<Index>(ms.size()));
    for (std::size_t k = 0; k < ms.size(); ++k) {
        ChainMap<K> f1 = rebind(ms[k].f1, p.leg1.cx, q.leg1.cx), f2 = rebind(ms[k].f2, p.leg2.cx, q.leg2.cx);
        rhs.col(static_cast<Index>(k)) = concat(f, flatten(f, f1.comps), flatten(f, f2.comps));
    }
    Mat<K> x = zeros(f, s.sys.cols(), rhs.cols());
    if (!is_zero<K>(rhs)) {
        auto sol = s.sys.cols() == 0 ? std::nullopt : solve_particular<K>(s.sys, rhs);
        if (!sol)
            throw HardFailure("fullness: no g: P -> Q with Ind^L(g) homotopic to the given morphism");
        x = *sol;
    }
    for (std::size_t k = 0; k < ms.size(); ++k) {
        out.push_back(leg_solution(p, q, s, Vec<K>(x.col(static_cast<Index>(k)))));
        if (!preimage_holds(p, q, out.back(), rebind(ms[k].f1, p.leg1.cx, q.leg1.cx),
                            rebind(ms[k].f2, p.leg2.cx, q.leg2.cx)))
            throw HardFailure("fullness: preimage witness fails verification");
    }
    return out;
}

template <class K>
Preimage<K> fullness_witness(const DIndResult<K>& p, const DIndResult<K>& q, const DTrMorphism<K>& m)
{
    return fullness_witnesses(p, q, std::vector<DTrMorphism<K>>{m}).front();
}

template <class K>
KernelBasis<K> kernel_basis(const DIndResult<K>& p, const DIndResult<K>& q)
{
    const Field<K>& f = p.p.field();
    LegSystem<K> s = leg_system(p, q);
    KernelBasis<K> out{s.hom, {}};
    const Index ng = s.hom.cycles.dim();
    if (s.hom.dim() == 0 || ng == 0)
        return out;
    Subspace<K> sol = Subspace<K>::kernel(s.sys, f.one());
    Mat<K> cyc = sol.dim() == 0 ? zeros(f, ng, 0) : Mat<K>(sol.basis().topRows(ng));
    // Kernel classes inside Hom_K(P, Q).
    Subspace<K> classes = Subspace<K>::span(Mat<K>(s.hom.classes.project() * cyc), s.hom.dim());
    const Mat<K> cb = basis_of(f, s.hom.cycles);
    for (Index k = 0; k < classes.dim(); ++k) {
        ChainMap<K> g = s.hom.from_maps_coords(Vec<K>(cb * s.hom.classes.section() * classes.basis().col(k)));
        auto h1 = null_homotopy_witness(induce_chain_map(p.leg1, q.leg1, g));
        auto h2 = null_homotopy_witness(induce_chain_map(p.leg2, q.leg2, g));
        if (!h1 || !h2)
            throw HardFailure("kernel_basis: representative is not killed by Ind^L");
        out.elements.push_back(Preimage<K>{g, *h1, *h2});
    }
    return out;
}

namespace {

template <class K>
struct SquareRecord
{
    ChainMap<K> vu;
    Homotopy<K> h;
};

/// Kernel bases for all ordered pairs, indexed i * n + j.
template <class K>
std::vector<KernelBasis<K>> all_kernels(const std::vector<DIndResult<K>>& inds)
{
    std::vector<KernelBasis<K>> out;
    for (const auto& a : inds)
        for (const auto& b : inds)
            out.push_back(kernel_basis(a, b));
    return out;
}

template <class K>
std::vector<SquareRecord<K>> square_zero_records(const std::vector<KernelBasis<K>>& ker, std::size_t n,
                                                 Diagnostics& diag)
{
    std::vector<SquareRecord<K>> out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const auto& u = ker[i * n + j].elements;
                const auto& v = ker[j * n + k].elements;
                for (std::size_t a = 0; a < u.size(); ++a)
                    for (std::size_t b = 0; b < v.size(); ++b) {
                        ChainMap<K> vu = compose(v[b].g, u[a].g);
                        auto h = null_homotopy_witness(vu);
                        if (!h) {
                            diag.fail("v u is not null-homotopic for objects (" + std::to_string(i) + "," +
                                      std::to_string(j) + "," + std::to_string(k) + "), kernel elements (" +
                                      std::to_string(a) + "," + std::to_string(b) + ")");
                            continue;
                        }
                        out.push_back({vu, *h});
                    }
            }
    return out;
}

template <class K>
std::vector<DIndResult<K>> ind_all(const PullbackData<K>& d, const std::vector<Complex<K>>& objects)
{
    std::vector<DIndResult<K>> out;
    for (const auto& x : objects)
        out.push_back(ind_L(d, x));
    return out;
}

template <class K>
struct IsoRecord
{
    ChainMap<K> g, left, right;
    /// left g - id and g right - id null-homotopic.
    Homotopy<K> hl, hr;
    bool invertible = false;
};

template <class K>
void check_hypotheses(const PullbackData<K>& d)
{
    if (!is_surjective(d.pi1))
        throw HypothesisRefused("pi1 is not surjective");
    if (!rprime_right_projective(d))
        throw HypothesisRefused("R' is not finitely generated projective as a right R2-module");
}

/// One candidate endomorphism g of P through the lemma argument.
template <class K>
std::optional<IsoRecord<K>> detect_one(const DIndResult<K>& ip, const ChainMap<K>& g, Diagnostics& diag,
                                       const std::string& label)
{
    const Complex<K>& p = ip.p;
    ChainMap<K> g1 = induce_chain_map(ip.leg1, ip.leg1, g), g2 = induce_chain_map(ip.leg2, ip.leg2, g);
    auto inv1 = homotopy_inverse(g1), inv2 = homotopy_inverse(g2);
    IsoRecord<K> rec{g, g, g, zero_homotopy(p, p), zero_homotopy(p, p), false};
    if (!inv1 || !inv2) {
        if (homotopy_inverse(g))
            diag.fail(label + ": g is a homotopy equivalence but Ind^L(g) is not");
        return std::nullopt;
    }
    auto m = dtr_morphism(ip.triple, ip.triple, inv1->g, inv2->g);
    if (!m) {
        diag.fail(label + ": leg inverses of Ind^L(g) are not compatible with can");
        return std::nullopt;
    }
    const ChainMap<K> id = identity_map(p);
    ChainMap<K> gp = fullness_witness(ip, ip, *m).g;
    // u = id - g' g and v = id - g g' lie in the kernel ideal, so u^2 ~ 0 ~ v^2.
    ChainMap<K> u = id - compose(gp, g), v = id - compose(g, gp);
    rec.left = compose(id + u, gp);
    rec.right = compose(gp, id + v);
    auto hl = null_homotopy_witness(compose(rec.left, g) - id);
    auto hr = null_homotopy_witness(compose(g, rec.right) - id);
    if (!hl || !hr) {
        diag.fail(label + ": (id + u) g' is not a homotopy inverse of g");
        return std::nullopt;
    }
    rec.hl = *hl;
    rec.hr = *hr;
    rec.invertible = true;
    return rec;
}

template <class K>
std::vector<IsoRecord<K>> detect_records(const PullbackData<K>& d, const std::vector<DIndResult<K>>& inds,
                                         const std::vector<KernelBasis<K>>& ker, std::mt19937_64& rng,
                                         Diagnostics& diag, Stats& negatives)
{
    (void)d;
    std::vector<IsoRecord<K>> out;
    const std::size_t n = inds.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Complex<K>& p = inds[i].p;
        const Field<K>& f = p.field();
        const HomotopyHom<K>& hom = ker[i * n + i].hom;
        const ChainMap<K> id = identity_map(p);
        std::vector<std::pair<std::string, ChainMap<K>>> cand{{"id", id}};
        for (std::size_t k = 0; k < ker[i * n + i].elements.size(); ++k)
            cand.push_back({"id+u" + std::to_string(k), id + ker[i * n + i].elements[k].g});
        for (int r = 0; r < 2 && hom.cycles.dim() > 0; ++r)
            cand.push_back({"random" + std::to_string(r),
                            hom.from_maps_coords(Vec<K>(hom.cycles.basis() *
                                                        random_vector(f, hom.cycles.dim(), rng)))});
        if (p.total_dim() > 0)
            cand.push_back({"zero", zero_map(p, p)});
        for (const auto& [name, g] : cand) {
            const std::string label = "object " + std::to_string(i) + " " + name;
            auto rec = detect_one(inds[i], g, diag, label);
            if (rec)
                out.push_back(std::move(*rec));
            else
                ++negatives.count;
        }
    }
    return out;
}

template <class K>
bool iso_record_holds(const IsoRecord<K>& r)
{
    const ChainMap<K> id = identity_map(r.g.source);
    return is_homotopy(compose(r.left, r.g), id, r.hl) && is_homotopy(compose(r.g, r.right), id, r.hr);
}

} // namespace

template <class K>
Diagnostics square_zero_check(const PullbackData<K>& d, const std::vector<Complex<K>>& objects)
{
    check_hypotheses(d);
    Diagnostics out;
    auto inds = ind_all(d, objects);
    auto ker = all_kernels(inds);
    auto recs = square_zero_records(ker, inds.size(), out);
    out.note(std::to_string(recs.size()) + " composable kernel pairs, all null-homotopic");
    return out;
}

template <class K>
Diagnostics detects_iso_check(const PullbackData<K>& d, const std::vector<Complex<K>>& objects, std::mt19937_64& rng)
{
    check_hypotheses(d);
    Diagnostics out;
    auto inds = ind_all(d, objects);
    std::vector<KernelBasis<K>> ker;
    const std::size_t n = inds.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            ker.push_back(i == j ? kernel_basis(inds[i], inds[i]) : KernelBasis<K>{});
    Stats neg;
    auto recs = detect_records(d, inds, ker, rng, out, neg);
    out.note(std::to_string(recs.size()) + " endomorphisms with Ind^L(g) invertible, all homotopy equivalences; " +
             std::to_string(neg.count) + " with Ind^L(g) not invertible");
    return out;
}

template <class K>
Diagnostics radical_condition(const PullbackData<K>& d)
{
    Diagnostics out;
    Subspace<K> rp = algebra_radical(*d.Rp());
    Subspace<K> r1 = algebra_radical(*d.R1()), r2 = algebra_radical(*d.R2());
    Subspace<K> im2 = r2.image(d.pi2.mat), im1 = r1.image(d.pi1.mat);
    if (!rp.contains(im2))
        out.fail("pi2(rad R2) is not contained in rad R'");
    else
        out.note("pi2(rad R2) in rad R' (dim " + std::to_string(im2.dim()) + " in " + std::to_string(rp.dim()) + ")");
    if (!rp.contains(im1))
        out.fail("pi1(rad R1) is not contained in rad R'");
    else
        out.note("pi1(rad R1) in rad R' (dim " + std::to_string(im1.dim()) + " in " + std::to_string(rp.dim()) + ")");
    return out;
}

template <class K>
bool radical_condition_check(const PullbackData<K>& d)
{
    return radical_condition(d).ok();
}

template <class K>
DensityLift<K> density_lift(const DerivedTriple<K>& t)
{
    const auto& d = t.data;
    check_hypotheses(d);
    Diagnostics rc = radical_condition(d);
    if (!rc.ok())
        throw HypothesisRefused(rc.first());
    if (!is_projective_complex(t.p1) || !is_projective_complex(t.p2))
        throw HypothesisRefused("density: legs are not complexes of projectives");
    if (!is_gluing(t))
        throw HypothesisRefused("density: c is not a quasi-isomorphism");

    DensityLift<K> out;
    out.m1 = minimize(t.p1);
    out.m2 = minimize(t.p2);
    const Complex<K>& q1 = out.m1.q;
    const Complex<K>& q2 = out.m2.q;
    InducedComplex<K> i1 = induce_complex(d.pi1, q1), i2 = induce_complex(d.pi2, q2);
    if (!is_minimal(q1) || !is_minimal(q2))
        throw HardFailure("density: minimized legs are not minimal");
    if (!is_minimal(i1.cx) || !is_minimal(i2.cx))
        throw HardFailure("density: R' (x) of a minimal leg is not minimal");
    out.diag.note("minimal legs " + dims_of(q1) + " and " + dims_of(q2) + " (cancelled " +
                  std::to_string(out.m1.cancelled) + ", " + std::to_string(out.m2.cancelled) + ")");
    out.c_min = compose(compose(induce_chain_map(t.ind2, i2, out.m2.rho), t.c), induce_chain_map(i1, t.ind1, out.m1.iota));
    if (!is_chain_map(out.c_min))
        throw HardFailure("density: transported c is not a chain map");
    if (!is_chain_iso(out.c_min))
        throw HardFailure("density: transported c between minimal complexes is not degreewise invertible");
    out.diag.note("transported c degreewise invertible");

    const int lo = std::min(q1.empty() ? q2.lo() : q1.lo(), q2.empty() ? q1.lo() : q2.lo());
    const int hi = std::max(q1.empty() ? q2.hi() : q1.hi(), q2.empty() ? q1.hi() : q2.hi());
    std::vector<Triple<K>> tr;
    std::vector<Counit<K>> cu;
    std::vector<Module<K>> terms;
    for (int n = lo; n <= hi && !(q1.empty() && q2.empty()); ++n) {
        tr.push_back(make_triple(d, q1.term(n), q2.term(n), out.c_min.at(n)));
        cu.push_back(counit(tr.back()));
        const Module<K>& m = cu.back().pb.module();
        if (m.dim() > 0 && !is_projective(m).projective)
            throw HardFailure("density: Pb in degree " + std::to_string(n) + " is not projective");
        if (!is_invertible<K>(cu.back().eps.f1) || !is_invertible<K>(cu.back().eps.f2))
            throw HardFailure("density: counit in degree " + std::to_string(n) + " is not an isomorphism");
        terms.push_back(m);
    }
    std::vector<Mat<K>> diffs;
    for (int n = lo; n < hi; ++n) {
        const auto k = static_cast<std::size_t>(n - lo);
        diffs.push_back(pb_map(cu[k].pb, cu[k + 1].pb, TripleMorphism<K>{q1.d(n), q2.d(n)}));
    }
    out.p = terms.empty() ? zero_complex(d.R()) : Complex<K>(d.R(), lo, std::move(terms), std::move(diffs));
    out.diag.note("lifted complex " + dims_of(out.p) + ", projective terms, d d = 0");

    out.ind = ind_L(d, out.p);
    ChainMap<K> e1 = chain_map(out.ind.leg1.cx, q1, [&](int n) {
        return cu[static_cast<std::size_t>(n - lo)].eps.f1;
    });
    ChainMap<K> e2 = chain_map(out.ind.leg2.cx, q2, [&](int n) {
        return cu[static_cast<std::size_t>(n - lo)].eps.f2;
    });
    if (!is_chain_map(e1) || !is_chain_map(e2) || !is_chain_iso(e1) || !is_chain_iso(e2))
        throw HardFailure("density: degreewise counits do not form chain isomorphisms");
    auto iso = dtr_morphism(out.ind.triple, t, compose(out.m1.iota, e1), compose(out.m2.iota, e2));
    if (!iso)
        throw HardFailure("density: Ind^L(P) -> T is not compatible with c");
    out.iso = *iso;
    if (!homotopy_inverse(out.iso.f1) || !homotopy_inverse(out.iso.f2))
        throw HardFailure("density: Ind^L(P) -> T is not a homotopy equivalence on legs");
    out.diag.note("Ind^L(P) -> T: legs homotopy equivalences, compatibility witnessed");
    return out;
}

template <class K>
Diagnostics cor_ff_check(const GammaRingPtr<K>& ring, const std::vector<Complex<K>>& objects)
{
    Diagnostics out;
    Bimodule<K> b = t0_bimodule(ring);
    std::vector<TensorComplex<K>> tc;
    for (const auto& x : objects)
        tc.push_back(tensor_complex(b, x));
    Index pairs = 0, total = 0;
    for (std::size_t i = 0; i < objects.size(); ++i)
        for (std::size_t j = 0; j < objects.size(); ++j) {
            const Field<K>& f = objects[i].field();
            HomotopyHom<K> h = homotopy_hom(objects[i], objects[j]);
            HomotopyHom<K> ht = homotopy_hom(tc[i].cx, tc[j].cx);
            const std::string at = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
            if (h.dim() != ht.dim())
                out.fail("pair " + at + ": dim Hom_K = " + std::to_string(h.dim()) + " but over Gamma " +
                         std::to_string(ht.dim()));
            Mat<K> img = zeros(f, ht.dim(), h.dim());
            for (Index k = 0; k < h.dim(); ++k)
                img.col(k) = ht.class_of(tensor_chain_map(tc[i], tc[j], h.element(k)));
            if (h.dim() > 0 && rank<K>(img) != h.dim())
                out.fail("pair " + at + ": (R2;R1) (x) - is not injective on Hom_K");
            ++pairs;
            total += h.dim();
        }
    out.note(std::to_string(pairs) + " pairs, total Hom dimension " + std::to_string(total) +
             ", equal over Gamma and injective");
    return out;
}

template <class K>
Complex<K> random_projective_complex(const AlgebraPtr<K>& a, std::mt19937_64& rng, const ComplexOptions& o)
{
    const Field<K>& f = a->field();
    const auto classes = projective_classes(a, o.max_dim);
    const int len = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(std::max(1, o.max_support)));
    std::vector<Module<K>> terms;
    for (int k = 0; k < len; ++k)
        terms.push_back(projective_sum(a, classes[static_cast<std::size_t>(rng() % classes.size())]));
    std::vector<Mat<K>> diffs;
    Mat<K> prev = zeros(f, terms[0].dim(), 0);
    for (int k = 0; k + 1 < len; ++k) {
        const Module<K>& src = terms[static_cast<std::size_t>(k)];
        const Module<K>& dst = terms[static_cast<std::size_t>(k + 1)];
        HomSpace<K> h = hom_space(src, dst);
        Mat<K> dk = zeros(f, dst.dim(), src.dim());
        if (h.dim() > 0) {
            // Half of the differentials are forced into the radical.
            const bool radical = rng() % 2 == 0;
            Mat<K> ann = zeros(f, 0, dst.dim());
            if (radical) {
                Subspace<K> a = Subspace<K>::kernel(Mat<K>(basis_of(f, radical_submodule(dst)).transpose()), f.one());
                if (a.dim() > 0)
                    ann = a.basis().transpose();
            }
            std::vector<Mat<K>> cons;
            for (const auto& e : h.basis())
                cons.push_back(vcat<K>({Mat<K>(vectorize<K>(Mat<K>(e * prev))), Mat<K>(vectorize<K>(Mat<K>(ann * e)))}, 1));
            Index rows = cons.front().rows();
            Mat<K> sys = hcat<K>(cons, rows);
            Subspace<K> ok = Subspace<K>::kernel(sys, f.one());
            if (ok.dim() > 0)
                dk = h.combine(Vec<K>(ok.basis() * random_vector(f, ok.dim(), rng)));
        }
        diffs.push_back(dk);
        prev = dk;
    }
    const int lo = -static_cast<int>(rng() % 2);
    return Complex<K>(a, lo, std::move(terms), std::move(diffs));
}

template <class K>
DerivedTriple<K> random_twisted_triple(const PullbackData<K>& d, std::mt19937_64& rng, const ComplexOptions& o)
{
    Complex<K> p = random_projective_complex(d.R(), rng, o);
    DIndResult<K> r = ind_L(d, p);
    const DerivedTriple<K>& t = r.triple;
    const Field<K>& f = p.field();
    // A random R'-chain automorphism of R' (x) P2, not necessarily induced from R2.
    HomotopyHom<K> h = homotopy_hom(t.ind2.cx, t.ind2.cx);
    ChainMap<K> twist = identity_map(t.ind2.cx);
    for (int attempt = 0; attempt < 8 && h.cycles.dim() > 0; ++attempt) {
        ChainMap<K> a = h.from_maps_coords(Vec<K>(h.cycles.basis() * random_vector(f, h.cycles.dim(), rng)));
        if (is_chain_iso(a)) {
            twist = a;
            break;
        }
    }
    return make_derived_triple(d, t.p1, t.p2, compose(twist, t.c));
}

template <class K>
std::vector<Check> epivalence_suite(const PullbackData<K>& d, const SuiteOptions& options)
{
    std::vector<Check> checks;
    Check hyp;
    hyp.id = "derived.hypotheses";
    if (!is_surjective(d.pi1)) {
        hyp.refuse("pi1 is not surjective");
        checks.push_back(std::move(hyp));
        const auto& rp = *d.Rp();
        Vec<K> twist = rp.unit();
        Subspace<K> rad = algebra_radical(rp);
        if (rad.dim() > 0)
            twist += rad.basis().col(0);
        Check ce = counterexample_check(d, twist);
        ce.id = "derived.counterexample";
        checks.push_back(std::move(ce));
        return checks;
    }
    if (!rprime_right_projective(d)) {
        hyp.refuse("R' is not finitely generated projective as a right R2-module");
        checks.push_back(std::move(hyp));
        return checks;
    }
    Diagnostics rc = radical_condition(d);
    hyp.absorb(rc);
    if (!rc.ok()) {
        hyp.status = Status::refused;
        checks.push_back(std::move(hyp));
        return checks;
    }
    hyp.add("pi1 surjective, R' f.g. projective over R2");

    std::mt19937_64 rng(options.seed);
    std::vector<Complex<K>> objects{stalk(regular_module(d.R()))};
    for (int s = 0; s < options.seeds; ++s)
        objects.push_back(random_projective_complex(d.R(), rng, options.complexes));
    for (std::size_t i = 0; i < objects.size(); ++i)
        hyp.add("object " + std::to_string(i) + ": " + dims_of(objects[i]));
    checks.push_back(std::move(hyp));
    auto inds = ind_all(d, objects);
    const std::size_t n = inds.size();
    auto ker = all_kernels(inds);

    Check full;
    full.id = "derived.fullness";
    Check kern;
    kern.id = "derived.kernel";
    Index basis_total = 0, ker_total = 0, ker_nonzero = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const std::string at = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
            DtrHom<K> h = dtr_hom(inds[i].triple, inds[j].triple);
            const KernelBasis<K>& kb = ker[i * n + j];
            const Index expect = kb.hom.dim() - static_cast<Index>(kb.elements.size());
            if (h.dim() != expect)
                full.fail("pair " + at + ": dim Hom_DTr = " + std::to_string(h.dim()) + " but dim Hom_K - dim ker = " +
                          std::to_string(expect));
            const std::vector<DTrMorphism<K>> ms = h.basis();
            const std::vector<Preimage<K>> ws = fullness_witnesses(inds[i], inds[j], ms);
            for (std::size_t k = 0; k < ms.size(); ++k) {
                full.certify([p = inds[i], q = inds[j], m = ms[k], w = ws[k]]() {
                    return is_dtr_morphism(p.triple, q.triple, m) && preimage_holds(p, q, w, m.f1, m.f2);
                });
                ++basis_total;
            }
            for (const auto& e : kb.elements) {
                kern.certify([p = inds[i], q = inds[j], e]() {
                    return preimage_holds(p, q, e, zero_map(p.leg1.cx, q.leg1.cx), zero_map(p.leg2.cx, q.leg2.cx));
                });
            }
            ker_total += static_cast<Index>(kb.elements.size());
            if (!kb.elements.empty()) {
                ++ker_nonzero;
                kern.add("pair " + at + ": dim Hom_K = " + std::to_string(kb.hom.dim()) + ", kernel dim " +
                         std::to_string(kb.elements.size()));
            }
        }
    full.add(std::to_string(n * n) + " object pairs, " + std::to_string(basis_total) +
             " Hom_DTr basis morphisms, each with a preimage witness");
    full.add("dim Hom_DTr(Ind^L P, Ind^L Q) = dim Hom_K(P, Q) - dim kernel on every pair");
    kern.add("total kernel dimension " + std::to_string(ker_total) + " over " + std::to_string(ker_nonzero) +
             " pairs; every basis element has null-homotopies of both legs");
    checks.push_back(std::move(full));
    checks.push_back(std::move(kern));

    Check sq;
    sq.id = "derived.square_zero";
    {
        Diagnostics diag;
        auto recs = square_zero_records(ker, n, diag);
        sq.absorb(diag);
        sq.add(std::to_string(recs.size()) + " composable kernel pairs, every composite null-homotopic");
        for (const auto& r : recs)
            sq.certify([r]() { return is_homotopy(r.vu, zero_map(r.vu.source, r.vu.target), r.h); });
    }
    checks.push_back(std::move(sq));

    Check det;
    det.id = "derived.detects_iso";
    {
        Diagnostics diag;
        Stats neg;
        auto recs = detect_records(d, inds, ker, rng, diag, neg);
        det.absorb(diag);
        det.add(std::to_string(recs.size()) + " endomorphisms with Ind^L(g) invertible, each given a two-sided "
                                              "homotopy inverse (g' from fullness, corrected by id + u)");
        det.add(std::to_string(neg.count) + " sampled endomorphisms with Ind^L(g) not invertible, none a homotopy "
                                            "equivalence");
        for (const auto& r : recs)
            det.certify([r]() { return iso_record_holds(r); });
    }
    checks.push_back(std::move(det));

    Check den;
    den.id = "derived.density";
    {
        std::vector<std::pair<std::string, DerivedTriple<K>>> samples;
        for (std::size_t i = 0; i < n; ++i)
            samples.push_back({"Ind^L(object " + std::to_string(i) + ")", inds[i].triple});
        for (int s = 0; s < options.seeds; ++s)
            samples.push_back({"twisted " + std::to_string(s), random_twisted_triple(d, rng, options.complexes)});
        int lifted = 0;
        for (const auto& [name, t] : samples) {
            DensityLift<K> lift = density_lift(t);
            den.add(name + ": P = " + dims_of(lift.p) + ", minimal legs " + dims_of(lift.m1.q) + " and " +
                    dims_of(lift.m2.q));
            den.certify([t, lift]() {
                return is_dtr_morphism(lift.ind.triple, t, lift.iso) && is_minimal(lift.m1.q) &&
                       is_minimal(lift.m2.q) && is_chain_iso(lift.c_min);
            });
            ++lifted;
        }
        // Round trip on induced samples: Ind^L(lift) ~ Ind^L(P) gives P' ~ P over R.
        for (std::size_t i = 0; i < n; ++i) {
            DensityLift<K> lift = density_lift(inds[i].triple);
            Preimage<K> w = fullness_witness(lift.ind, inds[i], lift.iso);
            auto inv = homotopy_inverse(w.g);
            if (!inv) {
                den.fail("object " + std::to_string(i) + ": lift is not homotopy equivalent to the original");
                continue;
            }
            den.certify([g = w.g, inv = *inv]() {
                return is_homotopy(identity_map(g.source), compose(inv.g, g), inv.left) &&
                       is_homotopy(identity_map(g.target), compose(g, inv.g), inv.right);
            });
        }
        den.add(std::to_string(lifted) + " gluing derived triples lifted; minimal legs have im d in rad, transported "
                                         "c degreewise invertible, Ind^L(P) -> T witnessed");
        den.add(std::to_string(n) + " round trips P -> lift(Ind^L P) certified homotopy equivalences");
    }
    checks.push_back(std::move(den));

    GammaRingPtr<K> ring = gamma_ring(d);
    Check ff;
    ff.id = "derived.cor_ff";
    ff.absorb(cor_ff_check(ring, objects));
    ff.certify([ring, objects]() { return cor_ff_check(ring, objects).ok(); });
    checks.push_back(std::move(ff));

    Check dp;
    dp.id = "derived.dphi";
    {
        std::mt19937_64 local(options.seed + 1);
        std::vector<DerivedTriple<K>> ts{inds[0].triple};
        for (int s = 0; s < std::min(options.seeds, 2); ++s)
            ts.push_back(random_twisted_triple(d, local, options.complexes));
        for (std::size_t i = 0; i < ts.size(); ++i)
            for (std::size_t j = 0; j < ts.size(); ++j)
                dp.absorb(dphi_hom_check(ring, ts[i], ts[j]),
                          "pair (" + std::to_string(i) + "," + std::to_string(j) + "): ");
    }
    checks.push_back(std::move(dp));
    return checks;
}

#define PHL_INSTANTIATE_DERIVED(K)                                                                          \
    template struct PairHom<K>;                                                                             \
    template struct DtrHom<K>;                                                                              \
    template DerivedTriple<K> make_derived_triple<K>(const PullbackData<K>&, const Complex<K>&,             \
                                                     const Complex<K>&, const ChainMap<K>&);                \
    template DerivedTriple<K> zero_derived_triple<K>(const PullbackData<K>&);                               \
    template bool is_gluing<K>(const DerivedTriple<K>&);                                                    \
    template bool is_dtr_morphism<K>(const DerivedTriple<K>&, const DerivedTriple<K>&,                      \
                                     const DTrMorphism<K>&);                                                \
    template ChainMap<K> push1<K>(const DerivedTriple<K>&, const DerivedTriple<K>&, const ChainMap<K>&);    \
    template ChainMap<K> push2<K>(const DerivedTriple<K>&, const DerivedTriple<K>&, const ChainMap<K>&);    \
    template std::optional<DTrMorphism<K>> dtr_morphism<K>(const DerivedTriple<K>&, const DerivedTriple<K>&, \
                                                           const ChainMap<K>&, const ChainMap<K>&);         \
    template DTrMorphism<K> compose<K>(const DerivedTriple<K>&, const DerivedTriple<K>&,                    \
                                       const DerivedTriple<K>&, const DTrMorphism<K>&,                      \
                                       const DTrMorphism<K>&);                                              \
    template DIndResult<K> ind_L<K>(const PullbackData<K>&, const Complex<K>&);                             \
    template DTrMorphism<K> ind_L_map<K>(const DIndResult<K>&, const DIndResult<K>&, const ChainMap<K>&);   \
    template PairHom<K> pair_hom<K>(const Complex<K>&, const Complex<K>&, const Complex<K>&,                \
                                    const Complex<K>&, const Complex<K>&, const Complex<K>&,                \
                                    std::function<ChainMap<K>(const ChainMap<K>&, const ChainMap<K>&)>);    \
    template DtrHom<K> dtr_hom<K>(const DerivedTriple<K>&, const DerivedTriple<K>&);                        \
    template CommaObject<K> psi_view<K>(const GammaComplex<K>&);                                            \
    template CommaObject<K> dphi<K>(const GammaRingPtr<K>&, const DerivedTriple<K>&);                       \
    template PairHom<K> comma_hom<K>(const CommaObject<K>&, const CommaObject<K>&);                         \
    template Diagnostics dphi_hom_check<K>(const GammaRingPtr<K>&, const DerivedTriple<K>&,                 \
                                           const DerivedTriple<K>&);                                        \
    template Preimage<K> fullness_witness<K>(const DIndResult<K>&, const DIndResult<K>&,                    \
                                             const DTrMorphism<K>&);                                        \
    template std::vector<Preimage<K>> fullness_witnesses<K>(const DIndResult<K>&, const DIndResult<K>&,     \
                                                            const std::vector<DTrMorphism<K>>&);            \
    template KernelBasis<K> kernel_basis<K>(const DIndResult<K>&, const DIndResult<K>&);                    \
    template Diagnostics square_zero_check<K>(const PullbackData<K>&, const std::vector<Complex<K>>&);      \
    template Diagnostics detects_iso_check<K>(const PullbackData<K>&, const std::vector<Complex<K>>&,       \
                                              std::mt19937_64&);                                            \
    template Diagnostics radical_condition<K>(const PullbackData<K>&);                                      \
    template bool radical_condition_check<K>(const PullbackData<K>&);                                       \
    template DensityLift<K> density_lift<K>(const DerivedTriple<K>&);                                       \
    template Diagnostics cor_ff_check<K>(const GammaRingPtr<K>&, const std::vector<Complex<K>>&);           \
    template Complex<K> random_projective_complex<K>(const AlgebraPtr<K>&, std::mt19937_64&,                \
                                                     const ComplexOptions&);                                \
    template DerivedTriple<K> random_twisted_triple<K>(const PullbackData<K>&, std::mt19937_64&,            \
                                                       const ComplexOptions&);                              \
    template std::vector<Check> epivalence_suite<K>(const PullbackData<K>&, const SuiteOptions&);

PHL_INSTANTIATE_DERIVED(Rational)
PHL_INSTANTIATE_DERIVED(Fp)

} // namespace phl
