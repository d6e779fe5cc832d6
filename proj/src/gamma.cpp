#include "phl/gamma.hpp"

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
void short_exact(Diagnostics& out, const std::string& name, const Module<K>& a, const Module<K>& b,
                 const Module<K>& c, const Mat<K>& f, const Mat<K>& g)
{
    if (!is_morphism(a, b, f) || !is_morphism(b, c, g)) {
        out.fail(name + ": a map is not Gamma-linear");
        return;
    }
    if (!is_zero<K>(Mat<K>(g * f)))
        out.fail(name + ": composite is not zero");
    if (rank<K>(f) != a.dim())
        out.fail(name + ": left map is not injective");
    if (rank<K>(g) != c.dim())
        out.fail(name + ": right map is not surjective");
    if (a.dim() + c.dim() != b.dim())
        out.fail(name + ": not exact in the middle");
    if (out.ok())
        out.note(name + " exact with dims (" + std::to_string(a.dim()) + "," + std::to_string(b.dim()) + "," +
                 std::to_string(c.dim()) + ")");
}

// phi on plain f_k (x) e_j from c, via c(1 (x) x1) = sum a' (x) y and f(a') y.
template <class K>
Mat<K> structure_plain(const GammaRing<K>& r, const Module<K>& x2, const Induced<K>& ind1, const Induced<K>& ind2,
                       const Mat<K>& c)
{
    const Field<K>& f = x2.field();
    const Index d1 = ind1.canonical.cols(), d2 = x2.dim(), np = r.data.Rp()->dim();
    Mat<K> lift = ind2.tm.t.q.section() * c * ind1.canonical;
    Mat<K> out = zeros(f, d2, r.nd() * d1);
    for (Index k = 0; k < r.nd(); ++k) {
        const Mat<K>& fk = r.dual.functionals[static_cast<std::size_t>(k)];
        for (Index a = 0; a < np; ++a) {
            Vec<K> val = fk.col(a);
            if (is_zero<K>(Mat<K>(val)))
                continue;
            Mat<K> act = x2.act_of(val);
            for (Index j = 0; j < d1; ++j)
                out.col(k * d1 + j) += act * lift.block(a * d2, j, d2, 1);
        }
    }
    return out;
}

} // namespace

template <class K>
Vec<K> GammaRing<K>::e2() const
{
    Vec<K> v = gamma->zero_vector();
    v.head(n2()) = data.R2()->unit();
    return v;
}

template <class K>
Vec<K> GammaRing<K>::e1() const
{
    Vec<K> v = gamma->zero_vector();
    v.tail(n1()) = data.R1()->unit();
    return v;
}

template <class K>
GammaRingPtr<K> gamma_ring(const PullbackData<K>& d)
{
    auto r = std::make_shared<GammaRing<K>>();
    r->data = d;
    r->rprime = algebra_bimodule(d.pi1, d.pi2);
    r->dual = right_dual(r->rprime);
    r->ev = evaluation(r->dual, r->rprime);
    std::vector<std::string> names;
    for (Index k = 0; k < r->dual.bimodule.dim; ++k)
        names.push_back("f" + std::to_string(k + 1));
    r->gamma = triangular(d.R2(), d.R1(), r->dual.bimodule.dim, r->dual.bimodule.lact, r->dual.bimodule.ract, names);
    // A right R2-module is a left module over R2^op.
    Module<K> right(opposite(d.R2()), r->rprime.dim, r->rprime.ract);
    r->rprime_projective = is_projective(right).projective;
    return r;
}

template <class K>
GammaModule<K> make_gamma_module(const GammaRingPtr<K>& ring, const Module<K>& x2, const Module<K>& x1,
                                 const Mat<K>& phi_plain)
{
    const GammaRing<K>& r = *ring;
    if (x2.alg() != r.data.R2() || x1.alg() != r.data.R1())
        throw InputError("gamma module: components are over the wrong algebras");
    const Field<K>& f = x2.field();
    const Index d2 = x2.dim(), d1 = x1.dim(), nd = r.nd();
    if (phi_plain.rows() != d2 || phi_plain.cols() != nd * d1)
        throw InputError("gamma module: structure morphism has the wrong shape");
    GammaModule<K> g{ring, x2, x1, tensor(r.dual.bimodule, x1), {}, {}};
    const Quotient<K>& q = g.dx1.t.q;
    if (!is_zero<K>(Mat<K>(phi_plain * basis_of(f, q.relations()))))
        throw HardFailure("gamma module: structure morphism is not balanced over R1");
    g.phi = phi_plain * q.section();
    for (Index i = 0; i < r.n2(); ++i)
        if (!(g.phi * g.dx1.module.act(i) == x2.act(i) * g.phi))
            throw HardFailure("gamma module: structure morphism is not R2-linear");

    const Index n = d2 + d1;
    std::vector<Mat<K>> acts;
    for (Index i = 0; i < r.n2(); ++i) {
        Mat<K> a = zeros(f, n, n);
        a.topLeftCorner(d2, d2) = x2.act(i);
        acts.push_back(std::move(a));
    }
    for (Index k = 0; k < nd; ++k) {
        Mat<K> a = zeros(f, n, n);
        a.topRightCorner(d2, d1) = g.phi * q.project().middleCols(k * d1, d1);
        acts.push_back(std::move(a));
    }
    for (Index i = 0; i < r.n1(); ++i) {
        Mat<K> a = zeros(f, n, n);
        a.bottomRightCorner(d1, d1) = x1.act(i);
        acts.push_back(std::move(a));
    }
    g.module = make_module(r.gamma, n, std::move(acts));
    return g;
}

template <class K>
GammaModule<K> zero_gamma_module(const GammaRingPtr<K>& ring)
{
    const Field<K>& f = ring->gamma->field();
    return make_gamma_module(ring, zero_module(ring->data.R2()), zero_module(ring->data.R1()), zeros(f, 0, 0));
}

template <class K>
BlockForm<K> block_form(const GammaRingPtr<K>& ring, const Module<K>& m)
{
    const GammaRing<K>& r = *ring;
    if (m.alg() != r.gamma)
        throw InputError("block form: module is not over Gamma");
    const Field<K>& f = m.field();
    Subspace<K> s2 = Subspace<K>::span(m.act_of(r.e2()), m.dim());
    Subspace<K> s1 = Subspace<K>::span(m.act_of(r.e1()), m.dim());
    const Mat<K> b2 = basis_of(f, s2), b1 = basis_of(f, s1);
    const Index d2 = s2.dim(), d1 = s1.dim();
    std::vector<Mat<K>> a2, a1;
    for (Index i = 0; i < r.n2(); ++i)
        a2.push_back(d2 ? s2.coords(Mat<K>(m.act(i) * b2)) : zeros(f, 0, 0));
    for (Index i = 0; i < r.n1(); ++i)
        a1.push_back(d1 ? s1.coords(Mat<K>(m.act(r.n2() + r.nd() + i) * b1)) : zeros(f, 0, 0));
    Mat<K> plain = zeros(f, d2, r.nd() * d1);
    for (Index k = 0; k < r.nd(); ++k)
        for (Index j = 0; j < d1; ++j) {
            Mat<K> img = m.act(r.n2() + k) * b1.col(j);
            if (!s2.contains(img))
                throw HardFailure("block form: R'* does not map e1 M into e2 M");
            if (d2)
                plain.col(k * d1 + j) = s2.coords(img);
        }
    BlockForm<K> out;
    out.g = make_gamma_module(ring, make_module(r.data.R2(), d2, std::move(a2)), make_module(r.data.R1(), d1, std::move(a1)),
                              plain);
    out.to_module = zeros(f, m.dim(), d2 + d1);
    out.to_module.leftCols(d2) = b2;
    out.to_module.rightCols(d1) = b1;
    if (!is_morphism(out.g.module, m, out.to_module) || !is_invertible<K>(out.to_module))
        throw HardFailure("block form: reassembled module is not isomorphic to M");
    return out;
}

template <class K>
GammaSum<K> gamma_sum(const GammaRingPtr<K>& ring, const std::vector<GammaModule<K>>& parts)
{
    const Field<K>& f = ring->gamma->field();
    GammaSum<K> out;
    if (parts.empty()) {
        out.g = zero_gamma_module(ring);
        return out;
    }
    std::vector<Module<K>> x2s, x1s;
    Index D2 = 0, D1 = 0;
    for (const auto& p : parts) {
        x2s.push_back(p.x2);
        x1s.push_back(p.x1);
        D2 += p.x2.dim();
        D1 += p.x1.dim();
    }
    const Index nd = ring->nd();
    Mat<K> plain = zeros(f, D2, nd * D1);
    Index o2 = 0, o1 = 0;
    for (const auto& p : parts) {
        const Index d2 = p.x2.dim(), d1 = p.x1.dim();
        Mat<K> local = p.phi * p.dx1.t.q.project();
        for (Index k = 0; k < nd; ++k)
            for (Index j = 0; j < d1; ++j)
                plain.block(o2, k * D1 + o1 + j, d2, 1) = local.col(k * d1 + j);
        Mat<K> inc = zeros(f, D2 + D1, d2 + d1);
        inc.block(o2, 0, d2, d2) = eye(f, d2);
        inc.block(D2 + o1, d2, d1, d1) = eye(f, d1);
        out.projections.push_back(inc.transpose());
        out.inclusions.push_back(std::move(inc));
        o2 += d2;
        o1 += d1;
    }
    out.g = make_gamma_module(ring, direct_sum(x2s).module, direct_sum(x1s).module, plain);
    return out;
}

template <class K>
Mat<K> block_map(const GammaModule<K>& s, const GammaModule<K>& t, const Mat<K>& f2, const Mat<K>& f1)
{
    Mat<K> out = zeros(s.ring->gamma->field(), t.dim(), s.dim());
    out.topLeftCorner(t.x2.dim(), s.x2.dim()) = f2;
    out.bottomRightCorner(t.x1.dim(), s.x1.dim()) = f1;
    return out;
}

template <class K>
GammaModule<K> phi(const GammaRingPtr<K>& ring, const Triple<K>& t)
{
    if (t.x1.alg() != ring->data.R1() || t.x2.alg() != ring->data.R2())
        throw InputError("Phi: triple is over a different diagram");
    return make_gamma_module(ring, t.x2, t.x1, structure_plain(*ring, t.x2, t.ind1, t.ind2, t.c));
}

template <class K>
Mat<K> phi_map(const GammaModule<K>& s, const GammaModule<K>& t, const TripleMorphism<K>& m)
{
    Mat<K> out = block_map(s, t, m.f2, m.f1);
    if (!is_morphism(s.module, t.module, out))
        throw HardFailure("Phi: image of a triple morphism is not Gamma-linear");
    return out;
}

template <class K>
PhiInverse<K> phi_inverse(const GammaModule<K>& g)
{
    const GammaRing<K>& r = *g.ring;
    if (!r.rprime_projective)
        throw HypothesisRefused("R' is not finitely generated projective as a right R2-module");
    const auto& d = r.data;
    Induced<K> ind1 = induce(d.pi1, g.x1), ind2 = induce(d.pi2, g.x2);
    HomSpace<K> h = hom_space(ind1.module(), ind2.module());
    const Mat<K>& sec = g.dx1.t.q.section();
    std::vector<Mat<K>> cols;
    for (const auto& c : h.basis())
        cols.push_back(Mat<K>(vectorize<K>(Mat<K>(structure_plain(r, g.x2, ind1, ind2, c) * sec))));
    const Index len = g.phi.size();
    Mat<K> l = cols.empty() ? zeros(g.x2.field(), len, 0) : hcat(cols, len);
    if (rank<K>(l) != h.dim())
        throw HardFailure("Phi is not injective on Hom_R'(R' (x) X1, R' (x) X2)");
    auto coef = solve_particular<K>(l, Mat<K>(vectorize<K>(g.phi)));
    if (!coef)
        throw HardFailure("structure morphism is not reached by any c");
    PhiInverse<K> out{make_triple(d, g.x1, g.x2, h.combine(Vec<K>(coef->col(0)))), {}};
    GammaModule<K> back = phi(g.ring, out.triple);
    if (!(back.phi == g.phi))
        throw HardFailure("Phi(phi_inverse(G)) does not reproduce the structure morphism");
    out.witness = eye(g.x2.field(), g.dim());
    return out;
}

template <class K>
TiltingModule<K> build_T(const GammaRingPtr<K>& ring, bool zero_psi)
{
    const GammaRing<K>& r = *ring;
    const auto& d = r.data;
    const Field<K>& f = r.gamma->field();
    const Index n1 = r.n1(), nd = r.nd();
    // psi(f (x) a1) = f(pi1(a1)).
    Mat<K> psi = zeros(f, r.n2(), nd * n1);
    if (!zero_psi)
        for (Index k = 0; k < nd; ++k)
            for (Index j = 0; j < n1; ++j)
                psi.col(k * n1 + j) = r.dual.functionals[static_cast<std::size_t>(k)] * d.pi1.mat.col(j);
    TiltingModule<K> t;
    t.t0 = make_gamma_module(ring, regular_module(d.R2()), regular_module(d.R1()), psi);
    t.t1 = make_gamma_module(ring, zero_module(d.R2()), regular_module(d.R1()), zeros(f, 0, nd * n1));
    t.t = gamma_sum(ring, std::vector<GammaModule<K>>{t.t0, t.t1});
    return t;
}

namespace {

template <class K>
struct SequenceModules
{
    GammaModule<K> dual0, dual1, t1, r2_0, t0;
};

template <class K>
SequenceModules<K> sequence_modules(const GammaRingPtr<K>& ring)
{
    const GammaRing<K>& r = *ring;
    const auto& d = r.data;
    const Field<K>& f = r.gamma->field();
    const Index n1 = r.n1(), nd = r.nd();
    Module<K> dual_left = r.dual.bimodule.left_module();
    // (R'*; R1) with f (x) a1 -> f a1.
    Mat<K> act = zeros(f, nd, nd * n1);
    for (Index k = 0; k < nd; ++k)
        for (Index j = 0; j < n1; ++j)
            act.col(k * n1 + j) = r.dual.bimodule.ract[static_cast<std::size_t>(j)].col(k);
    TiltingModule<K> t = build_T(ring);
    return {make_gamma_module(ring, dual_left, zero_module(d.R1()), zeros(f, nd, 0)),
            make_gamma_module(ring, dual_left, regular_module(d.R1()), act), t.t1,
            make_gamma_module(ring, regular_module(d.R2()), zero_module(d.R1()), zeros(f, r.n2(), 0)), t.t0};
}

template <class K>
void check_hypotheses(const GammaRing<K>& r)
{
    if (!is_surjective(r.data.pi1))
        throw HypothesisRefused("pi1 is not surjective");
    if (!r.rprime_projective)
        throw HypothesisRefused("R' is not finitely generated projective as a right R2-module");
}

} // namespace

template <class K>
Diagnostics verify_sequences(const GammaRingPtr<K>& ring)
{
    check_hypotheses(*ring);
    const Field<K>& f = ring->gamma->field();
    SequenceModules<K> s = sequence_modules(ring);
    Diagnostics out;
    auto into = [&](const GammaModule<K>& a, const GammaModule<K>& b) {
        return block_map(a, b, eye(f, a.x2.dim()), zeros(f, b.x1.dim(), 0));
    };
    auto onto = [&](const GammaModule<K>& b, const GammaModule<K>& c) {
        return block_map(b, c, zeros(f, 0, b.x2.dim()), eye(f, b.x1.dim()));
    };
    short_exact(out, "0 -> (R'*;0) -> (R'*;R1) -> (0;R1) -> 0", s.dual0.module, s.dual1.module, s.t1.module,
                into(s.dual0, s.dual1), onto(s.dual1, s.t1));
    short_exact(out, "0 -> (R2;0) -> (R2;R1) -> (0;R1) -> 0", s.r2_0.module, s.t0.module, s.t1.module,
                into(s.r2_0, s.t0), onto(s.t0, s.t1));
    if (!is_projective(s.dual0.module).projective)
        out.fail("(R'*;0) is not projective");
    else
        out.note("(R'*;0) is projective");
    return out;
}

template <class K>
Diagnostics verify_tilting(const GammaRingPtr<K>& ring, const TiltingModule<K>& t)
{
    check_hypotheses(*ring);
    const GammaRing<K>& r = *ring;
    const Field<K>& f = r.gamma->field();
    const Module<K>& tm = t.t.g.module;
    Diagnostics out;

    if (!pd_at_most(t.t0.module, 1) || !pd_at_most(t.t1.module, 1) || !pd_at_most(tm, 1))
        out.fail("pd_Gamma(T) > 1");
    else
        out.note("pd_Gamma(T) <= 1 (both summands)");
    Ext1<K> e = ext1(tm, tm);
    if (e.dim != 0)
        out.fail("Ext^1_Gamma(T, T) has dimension " + std::to_string(e.dim));
    else
        out.note("Ext^1_Gamma(T, T) = 0");

    // Gamma in <T>: T0, T1 in add T; (R2;0) = Ker(T0 -> T1); (R'*;0) in add (R2;0);
    // (R'*;R1) an extension of (0;R1) by (R'*;0); Gamma = (R2;0) (+) (R'*;R1).
    Diagnostics wit;
    for (std::size_t i = 0; i < t.t.inclusions.size(); ++i)
        if (!(t.t.projections[i] * t.t.inclusions[i] == eye(f, t.t.inclusions[i].cols())))
            wit.fail("summand " + std::to_string(i) + " of T does not split off");
    SequenceModules<K> s = sequence_modules(ring);
    Diagnostics seq;
    short_exact(seq, "(R2;0) = Ker((R2;R1) -> (0;R1))", s.r2_0.module, s.t0.module, s.t1.module,
                block_map(s.r2_0, s.t0, eye(f, r.n2()), zeros(f, r.n1(), 0)),
                block_map(s.t0, s.t1, zeros(f, 0, r.n2()), eye(f, r.n1())));
    short_exact(seq, "(R'*;R1) extension of (0;R1) by (R'*;0)", s.dual0.module, s.dual1.module, s.t1.module,
                block_map(s.dual0, s.dual1, eye(f, r.nd()), zeros(f, r.n1(), 0)),
                block_map(s.dual1, s.t1, zeros(f, 0, r.nd()), eye(f, r.n1())));
    wit.absorb(seq);

    Projectivity<K> pr = is_projective(s.dual0.x2);
    if (!pr.projective) {
        wit.fail("R'* is not projective over R2");
    } else {
        GammaModule<K> free = make_gamma_module(ring, pr.cover.free, zero_module(r.data.R1()),
                                                zeros(f, pr.cover.free.dim(), 0));
        Mat<K> split = block_map(s.dual0, free, pr.section, zeros(f, 0, 0));
        Mat<K> back = block_map(free, s.dual0, pr.cover.map, zeros(f, 0, 0));
        if (!is_morphism(s.dual0.module, free.module, split) || !is_morphism(free.module, s.dual0.module, back) ||
            !(back * split == eye(f, s.dual0.dim())))
            wit.fail("(R'*;0) is not a summand of (R2;0)^" + std::to_string(pr.cover.free.dim() / r.n2()));
        else
            wit.note("(R'*;0) is a summand of (R2;0)^" + std::to_string(pr.cover.free.dim() / r.n2()));
    }
    GammaSum<K> g = gamma_sum(ring, std::vector<GammaModule<K>>{s.r2_0, s.dual1});
    if (!is_morphism(g.g.module, regular_module(r.gamma), eye(f, r.gamma->dim())))
        wit.fail("Gamma is not (R2;0) (+) (R'*;R1) on the block basis");
    else
        wit.note("Gamma = (R2;0) (+) (R'*;R1)");
    out.absorb(wit, "<T>: ");
    if (wit.ok())
        out.note("Gamma lies in <T>");
    return out;
}

template <class K>
EndRing<K> end_algebra(const Module<K>& m)
{
    EndRing<K> out{hom_space(m, m), nullptr};
    const Index n = out.hom.dim();
    if (n == 0)
        return out;
    std::vector<Mat<K>> b = out.hom.basis();
    std::vector<Mat<K>> left;
    std::vector<std::string> names;
    for (Index i = 0; i < n; ++i) {
        Mat<K> l = zeros(m.field(), n, n);
        // b_i * b_j = b_j o b_i in the opposite ring.
        for (Index j = 0; j < n; ++j)
            l.col(j) = out.hom.coords(Mat<K>(b[j] * b[i]));
        left.push_back(std::move(l));
        names.push_back("h" + std::to_string(i));
    }
    EquipOptions<K> opts;
    opts.bare = true;
    out.alg = make_algebra<K>(m.field(), std::move(names), std::move(left), out.hom.coords(eye(m.field(), m.dim())),
                              opts);
    return out;
}

template <class K>
GammaPrimeComparison<K> compare_gamma_prime(const GammaRingPtr<K>& ring)
{
    check_hypotheses(*ring);
    const GammaRing<K>& r = *ring;
    const auto& d = r.data;
    const Field<K>& f = r.gamma->field();
    const auto& r1 = *d.R1();
    const auto& r2 = *d.R2();
    GammaPrimeComparison<K> out;
    out.gamma_prime = gamma_prime(d);
    TiltingModule<K> t = build_T(ring);
    out.end = end_algebra(t.t.g.module);
    Subspace<K> i1 = Subspace<K>::kernel(d.pi1.mat);
    const Index nr = d.R()->dim(), n1 = r.n1(), n2 = r.n2(), ni = i1.dim();
    const Index formula = nr + 2 * n1 + ni;
    out.diag.note("dim End_Gamma(T)^op = " + std::to_string(out.end.hom.dim()) + ", dim Gamma' = " +
                  std::to_string(out.gamma_prime->dim()) + ", dim R + 2 dim R1 + dim I1 = " + std::to_string(formula));
    if (out.end.hom.dim() != out.gamma_prime->dim() || formula != out.gamma_prime->dim()) {
        out.diag.fail("dim End_Gamma(T)^op differs from dim Gamma'");
        return out;
    }

    // T = (x2 | x1 of T0 | x1 of T1); (r, a, u, b) acts from the right as
    // [[r, a], [u, b]] on the row (T0, T1).
    const Index nt = n2 + 2 * n1;
    auto rho = [&](const Vec<K>& x) {
        Mat<K> m = zeros(f, n2 + n1, n2 + n1);
        m.topLeftCorner(n2, n2) = r2.right_mult(Vec<K>(d.i2.mat * x));
        m.bottomRightCorner(n1, n1) = r1.right_mult(Vec<K>(d.i1.mat * x));
        return m;
    };
    auto natural = [&](const Vec<K>& x) {
        const Vec<K> a = x.segment(nr, n1), u = i1.basis() * x.segment(nr + n1, ni), b = x.tail(n1);
        Mat<K> m = zeros(f, nt, nt);
        m.topLeftCorner(n2 + n1, n2 + n1) = rho(Vec<K>(x.head(nr)));
        m.block(n2 + n1, n2, n1, n1) = r1.right_mult(a);
        if (ni > 0)
            m.block(n2, n2 + n1, n1, n1) = r1.right_mult(u);
        m.block(n2 + n1, n2 + n1, n1, n1) = r1.right_mult(b);
        return m;
    };
    const auto& gp = *out.gamma_prime;
    out.iso = zeros(f, gp.dim(), gp.dim());
    std::vector<Mat<K>> images;
    for (Index i = 0; i < gp.dim(); ++i) {
        images.push_back(natural(gp.basis_vector(i)));
        if (!out.end.hom.contains(images.back())) {
            out.diag.fail("natural map: image of " + gp.name(i) + " is not a Gamma-endomorphism of T");
            return out;
        }
        out.iso.col(i) = out.end.hom.coords(images.back());
    }
    if (!is_invertible<K>(out.iso))
        out.diag.fail("natural map Gamma' -> End_Gamma(T)^op is not bijective");
    for (Index i = 0; i < gp.dim(); ++i)
        for (Index j = 0; j < gp.dim(); ++j)
            if (!(natural(gp.mult(gp.basis_vector(i), gp.basis_vector(j))) == images[j] * images[i]))
                out.diag.fail("natural map is not multiplicative on " + gp.name(i) + " * " + gp.name(j));
    if (!(natural(gp.unit()) == eye(f, nt)))
        out.diag.fail("natural map does not preserve the unit");
    if (out.diag.ok() && !validate_morphism(AlgebraMorphism<K>{out.gamma_prime, out.end.alg, out.iso, "nat"}).ok())
        out.diag.fail("natural map fails the algebra-morphism check on End(T)^op");
    if (out.diag.ok())
        out.diag.note("Gamma' -> End_Gamma(T)^op is an algebra isomorphism");

    HomSpace<K> h0 = hom_space(t.t0.module, t.t0.module);
    const auto& rr = *d.R();
    out.r_iso = zeros(f, h0.dim(), nr);
    if (h0.dim() != nr) {
        out.diag.fail("dim End_Gamma((R2;R1)) = " + std::to_string(h0.dim()) + " differs from dim R");
        return out;
    }
    for (Index i = 0; i < nr; ++i) {
        Mat<K> m = rho(rr.basis_vector(i));
        if (!h0.contains(m)) {
            out.diag.fail("right multiplication by " + rr.name(i) + " is not Gamma-linear");
            return out;
        }
        out.r_iso.col(i) = h0.coords(m);
    }
    bool mult = true;
    for (Index i = 0; i < nr; ++i)
        for (Index j = 0; j < nr; ++j)
            mult = mult && rho(rr.mult(rr.basis_vector(i), rr.basis_vector(j))) ==
                               Mat<K>(rho(rr.basis_vector(j)) * rho(rr.basis_vector(i)));
    if (!is_invertible<K>(out.r_iso) || !mult || !(rho(rr.unit()) == eye(f, n2 + n1)))
        out.diag.fail("R -> End_Gamma((R2;R1))^op is not a ring isomorphism");
    else
        out.diag.note("R -> End_Gamma((R2;R1))^op, r -> right multiplication, is a ring isomorphism");
    return out;
}

template <class K>
Bimodule<K> t0_bimodule(const GammaRingPtr<K>& ring)
{
    const GammaRing<K>& r = *ring;
    const auto& d = r.data;
    const Field<K>& f = r.gamma->field();
    TiltingModule<K> t = build_T(ring);
    Bimodule<K> b{r.gamma, d.R(), t.t0.dim(), t.t0.module.acts(), {}};
    for (Index i = 0; i < d.R()->dim(); ++i) {
        Mat<K> m = zeros(f, b.dim, b.dim);
        m.topLeftCorner(r.n2(), r.n2()) = d.R2()->right_mult(Vec<K>(d.i2.mat.col(i)));
        m.bottomRightCorner(r.n1(), r.n1()) = d.R1()->right_mult(Vec<K>(d.i1.mat.col(i)));
        b.ract.push_back(std::move(m));
    }
    Diagnostics v = validate_bimodule(b);
    if (!v.ok())
        throw HardFailure("(R2;R1) as a bimodule: " + v.first());
    return b;
}

template <class K>
Diagnostics check_phi_ind_tensor(const GammaRingPtr<K>& ring, const SampleOptions& options)
{
    const GammaRing<K>& r = *ring;
    const auto& d = r.data;
    const Field<K>& f = r.gamma->field();
    Bimodule<K> bim = t0_bimodule(ring);
    std::mt19937_64 rng(options.seed);
    std::vector<Module<K>> ms{zero_module(d.R()), regular_module(d.R())};
    for (int s = 0; s < options.samples; ++s)
        ms.push_back(random_module(d.R(), rng, options.max_dim));

    struct Sample
    {
        TensorModule<K> tm;
        IndResult<K> ir;
        GammaModule<K> g;
        Mat<K> can;
    };
    std::vector<Sample> samples;
    Diagnostics out;
    for (const auto& m : ms) {
        const Index dm = m.dim();
        Sample s{tensor(bim, m), ind(d, m), {}, {}};
        s.g = phi(ring, s.ir.triple);
        const Index d2 = s.g.x2.dim();
        Mat<K> plain = zeros(f, s.g.dim(), bim.dim * dm);
        for (Index x = 0; x < r.n2(); ++x)
            for (Index j = 0; j < dm; ++j)
                plain.block(0, x * dm + j, d2, 1) =
                    s.ir.leg2.tm.t.pure(unit_vector(f, r.n2(), x), unit_vector(f, dm, j));
        for (Index x = 0; x < r.n1(); ++x)
            for (Index j = 0; j < dm; ++j)
                plain.block(d2, (r.n2() + x) * dm + j, s.g.x1.dim(), 1) =
                    s.ir.leg1.tm.t.pure(unit_vector(f, r.n1(), x), unit_vector(f, dm, j));
        if (!is_zero<K>(Mat<K>(plain * basis_of(f, s.tm.t.q.relations())))) {
            out.fail("canonical map (R2;R1) (x)_R M -> Phi(Ind M) is not balanced");
            continue;
        }
        s.can = plain * s.tm.t.q.section();
        if (!is_morphism(s.tm.module, s.g.module, s.can) || !is_invertible<K>(s.can)) {
            out.fail("canonical map is not a Gamma-isomorphism for M of dim " + std::to_string(dm));
            continue;
        }
        samples.push_back(std::move(s));
    }
    int squares = 0;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i)
        for (std::size_t j : {i, i + 1}) {
            const Sample& a = samples[i];
            const Sample& b = samples[j];
            HomSpace<K> h = hom_space(a.ir.m, b.ir.m);
            for (Index k = 0; k < h.dim() && k < 3; ++k) {
                Mat<K> g = h.element(k);
                Mat<K> lhs = phi_map(a.g, b.g, ind_map(a.ir, b.ir, g)) * a.can;
                Mat<K> rhs = b.can * tensor_map(a.tm, b.tm, eye(f, bim.dim), g);
                if (!(lhs == rhs))
                    out.fail("naturality square of the tensor identification does not commute");
                ++squares;
            }
        }
    if (out.ok())
        out.note("Phi(Ind M) = (R2;R1) (x)_R M canonically on " + std::to_string(samples.size()) +
                 " modules; naturality on " + std::to_string(squares) + " maps");
    return out;
}

template <class K>
Check gamma_check(const PullbackData<K>& d, const SampleOptions& options)
{
    Check check;
    check.id = "gamma";
    GammaRingPtr<K> ring = gamma_ring(d);
    const GammaRing<K>& r = *ring;
    check.add("dim Gamma = " + std::to_string(r.gamma->dim()) + " (R2: " + std::to_string(r.n2()) +
              ", R'*: " + std::to_string(r.nd()) + ", R1: " + std::to_string(r.n1()) + ")");
    check.add(std::string("R' f.g. projective as a right R2-module: ") + (r.rprime_projective ? "yes" : "no"));
    TiltingModule<K> t = build_T(ring);
    check.add("dim T = dim R2 + 2 dim R1 = " + std::to_string(t.t.g.dim()));
    if (is_surjective(d.pi1))
        check.add("dim Gamma' = " + std::to_string(gamma_prime(d)->dim()));

    std::mt19937_64 rng(options.seed);
    std::vector<Triple<K>> ts{zero_triple(d), ind(d, regular_module(d.R())).triple};
    for (int s = 0; s < options.samples; ++s)
        if (auto tr = random_gluing_triple(d, rng, options.max_dim))
            ts.push_back(*tr);
    for (int s = 0; s < options.samples / 2; ++s) {
        Module<K> x1 = random_module(d.R1(), rng, options.max_dim), x2 = random_module(d.R2(), rng, options.max_dim);
        HomSpace<K> h = hom_space(induce(d.pi1, x1).module(), induce(d.pi2, x2).module());
        Vec<K> coef(h.dim());
        for (Index i = 0; i < h.dim(); ++i)
            coef(i) = d.R()->field().random(rng);
        ts.push_back(make_triple(d, x1, x2, h.combine(coef)));
    }
    std::vector<GammaModule<K>> gs;
    for (const auto& tr : ts)
        gs.push_back(phi(ring, tr));

    IsoResult<K> t0 = iso_test(gs[1].module, t.t0.module);
    if (!t0.found())
        check.fail("Phi(Ind R) is not isomorphic to (R2;R1) with psi");
    else
        check.add("Phi(Ind R) = (R2;R1) with psi: f (x) 1 -> f(1)");

    int round = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        BlockForm<K> bf = block_form(ring, gs[i].module);
        if (!(bf.g.module.acts() == gs[i].module.acts()))
            check.fail("block form of Phi(T) differs from its presentation");
        if (r.rprime_projective) {
            PhiInverse<K> inv = phi_inverse(gs[i]);
            if (!(inv.triple.c == ts[i].c))
                check.fail("phi_inverse(Phi(T)) does not recover c");
            else
                ++round;
        }
    }
    if (r.rprime_projective)
        check.add("phi_inverse(Phi(T)) = T exactly on " + std::to_string(round) + " triples");
    else
        check.add("skipped phi_inverse: R' is not f.g. projective over R2");

    int maps = 0, pairs = 0;
    const std::size_t lim = std::min<std::size_t>(ts.size(), 5);
    for (std::size_t i = 0; i < lim; ++i)
        for (std::size_t j = 0; j < lim; ++j) {
            TripleHom<K> th = triple_hom(ts[i], ts[j]);
            HomSpace<K> gh = hom_space(gs[i].module, gs[j].module);
            for (const auto& m : th.basis()) {
                Mat<K> pm = phi_map(gs[i], gs[j], m);
                if (!gh.contains(pm) || (is_zero<K>(pm) && !(is_zero<K>(m.f1) && is_zero<K>(m.f2))))
                    check.fail("Phi is not faithful on a triple morphism");
                ++maps;
            }
            if (r.rprime_projective && th.dim() != gh.dim())
                check.fail("dim Hom_Tr = " + std::to_string(th.dim()) + " but dim Hom_Gamma = " +
                           std::to_string(gh.dim()));
            ++pairs;
            // Composition through a third sample.
            const std::size_t k = (j + 1) % lim;
            TripleHom<K> tk = triple_hom(ts[j], ts[k]);
            if (th.dim() > 0 && tk.dim() > 0) {
                TripleMorphism<K> a = th.element(0), b = tk.element(0);
                if (!(phi_map(gs[i], gs[k], compose(b, a)) == Mat<K>(phi_map(gs[j], gs[k], b) * phi_map(gs[i], gs[j], a))))
                    check.fail("Phi does not preserve composition");
            }
        }
    check.add("Phi functorial and faithful on " + std::to_string(maps) + " Hom basis maps over " +
              std::to_string(pairs) + " pairs" + (r.rprime_projective ? ", Hom dimensions equal" : ""));
    Diagnostics tens = check_phi_ind_tensor(ring, options);
    check.absorb(tens);
    return check;
}

template <class K>
Check tilting_check(const PullbackData<K>& d)
{
    Check check;
    check.id = "tilting";
    GammaRingPtr<K> ring = gamma_ring(d);
    if (!is_surjective(d.pi1)) {
        check.refuse("pi1 is not surjective");
        return check;
    }
    if (!ring->rprime_projective) {
        check.refuse("R' is not finitely generated projective as a right R2-module");
        return check;
    }
    check.absorb(verify_sequences(ring));
    TiltingModule<K> t = build_T(ring);
    check.absorb(verify_tilting(ring, t));
    GammaPrimeComparison<K> cmp = compare_gamma_prime(ring);
    check.absorb(cmp.diag);

    TiltingModule<K> neg = build_T(ring, true);
    const Index ext = ext1(neg.t.g.module, neg.t.g.module).dim;
    if (ext == 0)
        check.fail("negative control: with psi = 0 Ext^1(T, T) still vanishes");
    else
        check.add("negative control (psi = 0): Ext^1(T, T) has dimension " + std::to_string(ext) +
                  ", so the Ext leg rejects it");

    check.witness("Gamma' -> End_Gamma(T)^op on Hom-basis coordinates =\n" + to_string<K>(cmp.iso));
    check.witness("R -> End_Gamma((R2;R1))^op =\n" + to_string<K>(cmp.r_iso));
    if (cmp.diag.ok()) {
        auto gp = cmp.gamma_prime;
        auto end = cmp.end.alg;
        Mat<K> iso = cmp.iso;
        check.certify([gp, end, iso]() {
            return is_invertible<K>(iso) && validate_morphism(AlgebraMorphism<K>{gp, end, iso, "nat"}).ok();
        });
    }
    Module<K> tm = t.t.g.module;
    check.certify([tm]() { return tm.dim() == 0 || validate_module(tm).ok(); });
    return check;
}

#define PHL_INSTANTIATE_GAMMA(K)                                                                            \
    template struct GammaRing<K>;                                                                           \
    template GammaRingPtr<K> gamma_ring<K>(const PullbackData<K>&);                                         \
    template GammaModule<K> make_gamma_module<K>(const GammaRingPtr<K>&, const Module<K>&, const Module<K>&, \
                                                 const Mat<K>&);                                            \
    template GammaModule<K> zero_gamma_module<K>(const GammaRingPtr<K>&);                                   \
    template BlockForm<K> block_form<K>(const GammaRingPtr<K>&, const Module<K>&);                          \
    template GammaSum<K> gamma_sum<K>(const GammaRingPtr<K>&, const std::vector<GammaModule<K>>&);          \
    template Mat<K> block_map<K>(const GammaModule<K>&, const GammaModule<K>&, const Mat<K>&, const Mat<K>&); \
    template GammaModule<K> phi<K>(const GammaRingPtr<K>&, const Triple<K>&);                               \
    template Mat<K> phi_map<K>(const GammaModule<K>&, const GammaModule<K>&, const TripleMorphism<K>&);     \
    template PhiInverse<K> phi_inverse<K>(const GammaModule<K>&);                                           \
    template TiltingModule<K> build_T<K>(const GammaRingPtr<K>&, bool);                                     \
    template Diagnostics verify_sequences<K>(const GammaRingPtr<K>&);                                       \
    template Diagnostics verify_tilting<K>(const GammaRingPtr<K>&, const TiltingModule<K>&);                \
    template EndRing<K> end_algebra<K>(const Module<K>&);                                                   \
    template GammaPrimeComparison<K> compare_gamma_prime<K>(const GammaRingPtr<K>&);                        \
    template Bimodule<K> t0_bimodule<K>(const GammaRingPtr<K>&);                                            \
    template Diagnostics check_phi_ind_tensor<K>(const GammaRingPtr<K>&, const SampleOptions&);             \
    template Check gamma_check<K>(const PullbackData<K>&, const SampleOptions&);                            \
    template Check tilting_check<K>(const PullbackData<K>&);

PHL_INSTANTIATE_GAMMA(Rational)
PHL_INSTANTIATE_GAMMA(Fp)

} // namespace phl
