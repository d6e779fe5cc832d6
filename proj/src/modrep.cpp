#include "phl/modrep.hpp"

namespace phl {

std::string to_string(IsoVerdict v)
{
    switch (v) {
    case IsoVerdict::isomorphic:
        return "isomorphic";
    case IsoVerdict::not_isomorphic:
        return "not isomorphic";
    case IsoVerdict::inconclusive:
        return "no isomorphism found (inconclusive)";
    }
    return "?";
}

template <class K>
Module<K>::Module(AlgebraPtr<K> alg, Index dim, std::vector<Mat<K>> act, Side side)
    : alg_(std::move(alg)), dim_(dim), side_(side)
{
    if (static_cast<Index>(act.size()) != alg_->dim())
        throw InputError("module: " + std::to_string(act.size()) + " action matrices for an algebra of dimension " +
                         std::to_string(alg_->dim()));
    for (auto& a : act) {
        if (a.rows() != dim || a.cols() != dim)
            throw InputError("module: action matrix of wrong shape");
        a = canonical(a, alg_->field());
    }
    act_ = std::make_shared<const std::vector<Mat<K>>>(std::move(act));
}

template <class K>
Mat<K> Module<K>::act_of(const Vec<K>& a) const
{
    Mat<K> out = zeros(field(), dim_, dim_);
    for (Index i = 0; i < a.size(); ++i)
        if (!(a(i) == K(0)))
            out += a(i) * act(i);
    return out;
}

template <class K>
Diagnostics validate_module(const Module<K>& m)
{
    Diagnostics d;
    const auto& a = *m.alg();
    if (!(m.act_of(a.unit()) == eye(m.field(), m.dim())))
        d.fail("the unit does not act as the identity");
    for (Index i = 0; i < a.dim(); ++i)
        for (Index j = 0; j < a.dim(); ++j) {
            const Vec<K> prod = m.side() == Side::left ? a.left(i).col(j) : a.left(j).col(i);
            if (!(Mat<K>(m.act(i) * m.act(j)) == m.act_of(prod)))
                d.fail("action law fails for (" + a.name(i) + ", " + a.name(j) + ")");
        }
    return d;
}

template <class K>
Module<K> make_module(AlgebraPtr<K> alg, Index dim, std::vector<Mat<K>> act, Side side)
{
    Module<K> m(std::move(alg), dim, std::move(act), side);
    Diagnostics d = validate_module(m);
    if (!d.ok())
        throw InputError("invalid module: " + d.first());
    return m;
}

template <class K>
bool is_morphism(const Module<K>& m, const Module<K>& n, const Mat<K>& f)
{
    if (f.rows() != n.dim() || f.cols() != m.dim())
        return false;
    for (Index i = 0; i < m.alg()->dim(); ++i)
        if (!(Mat<K>(f * m.act(i)) == Mat<K>(n.act(i) * f)))
            return false;
    return true;
}

template <class K>
Diagnostics validate_bimodule(const Bimodule<K>& b)
{
    Diagnostics d;
    d.absorb(validate_module(b.left_module()), "left: ");
    d.absorb(validate_module(b.right_module()), "right: ");
    for (std::size_t i = 0; i < b.lact.size(); ++i)
        for (std::size_t j = 0; j < b.ract.size(); ++j)
            if (!(Mat<K>(b.lact[i] * b.ract[j]) == Mat<K>(b.ract[j] * b.lact[i])))
                d.fail("left and right actions do not commute at (" + b.left_alg->name(static_cast<Index>(i)) +
                       ", " + b.right_alg->name(static_cast<Index>(j)) + ")");
    return d;
}

template <class K>
Module<K> regular_module(const AlgebraPtr<K>& a, Side side)
{
    std::vector<Mat<K>> act;
    for (Index i = 0; i < a->dim(); ++i)
        act.push_back(side == Side::left ? a->left(i) : a->right(i));
    return Module<K>(a, a->dim(), std::move(act), side);
}

template <class K>
Module<K> zero_module(const AlgebraPtr<K>& a, Side side)
{
    return Module<K>(a, 0, std::vector<Mat<K>>(static_cast<std::size_t>(a->dim()), Mat<K>(0, 0)), side);
}

template <class K>
Module<K> free_module(const AlgebraPtr<K>& a, Index rank)
{
    std::vector<Mat<K>> act;
    for (Index i = 0; i < a->dim(); ++i)
        act.push_back(block_diagonal(std::vector<Mat<K>>(static_cast<std::size_t>(rank), a->left(i))));
    if (rank == 0)
        return zero_module(a);
    return Module<K>(a, a->dim() * rank, std::move(act));
}

template <class K>
Module<K> projective_module(const AlgebraPtr<K>& a, const Vec<K>& e)
{
    return submodule(regular_module(a), Subspace<K>::span(a->right_mult(e), a->dim())).module;
}

template <class K>
Module<K> restrict_along(const AlgebraMorphism<K>& f, const Module<K>& n)
{
    if (f.target != n.alg())
        throw InputError("restriction: module is not over the target of '" + f.name + "'");
    std::vector<Mat<K>> act;
    for (Index i = 0; i < f.source->dim(); ++i)
        act.push_back(n.act_of(f.mat.col(i)));
    return Module<K>(f.source, n.dim(), std::move(act), n.side());
}

template <class K>
Bimodule<K> algebra_bimodule(const AlgebraMorphism<K>& f, const AlgebraMorphism<K>& g)
{
    if (f.target != g.target)
        throw InputError("algebra_bimodule: maps have different targets");
    const auto& c = *f.target;
    Bimodule<K> b{f.source, g.source, c.dim(), {}, {}};
    for (Index i = 0; i < f.source->dim(); ++i)
        b.lact.push_back(c.left_mult(f.mat.col(i)));
    for (Index j = 0; j < g.source->dim(); ++j)
        b.ract.push_back(c.right_mult(g.mat.col(j)));
    return b;
}

template <class K>
Bimodule<K> regular_bimodule(const AlgebraPtr<K>& a)
{
    return algebra_bimodule(identity_morphism(a), identity_morphism(a));
}

template <class K>
std::vector<Mat<K>> HomSpace<K>::basis() const
{
    std::vector<Mat<K>> out;
    for (Index k = 0; k < dim(); ++k)
        out.push_back(element(k));
    return out;
}

template <class K>
HomSpace<K> hom_space(const Module<K>& m, const Module<K>& n)
{
    if (m.alg() != n.alg())
        throw InputError("hom_space: modules over different algebras");
    if (m.side() != n.side())
        throw InputError("hom_space: modules on different sides");
    const Index dm = m.dim(), dn = n.dim(), unknowns = dm * dn;
    const auto& gens = m.alg()->generators();
    Mat<K> eq = zeros(m.field(), static_cast<Index>(gens.size()) * unknowns, unknowns);
    Index row = 0;
    for (Index g : gens) {
        const Mat<K>& ng = n.act(g);
        const Mat<K>& mg = m.act(g);
        for (Index j = 0; j < dm; ++j)
            for (Index i = 0; i < dn; ++i, ++row) {
                for (Index k = 0; k < dn; ++k)
                    if (!(ng(i, k) == K(0)))
                        eq(row, k + j * dn) += ng(i, k);
                for (Index k = 0; k < dm; ++k)
                    if (!(mg(k, j) == K(0)))
                        eq(row, i + k * dn) -= mg(k, j);
            }
    }
    HomSpace<K> h;
    h.rows = dn;
    h.cols = dm;
    if (unknowns == 0)
        h.space = Subspace<K>(0);
    else if (gens.empty())
        h.space = Subspace<K>::span(eye(m.field(), unknowns), unknowns);
    else
        h.space = Subspace<K>::kernel(eq);
    return h;
}

template <class K>
Mat<K> Tensor<K>::induced(const Mat<K>& f, const Mat<K>& g, const Tensor& target) const
{
    return target.q.project() * kron<K>(f, g) * q.section();
}

template <class K>
Vec<K> Tensor<K>::pure(const Vec<K>& x, const Vec<K>& y) const
{
    return q.project() * kron<K>(Mat<K>(x), Mat<K>(y));
}

template <class K>
Tensor<K> tensor_space(const Module<K>& right, const Module<K>& left)
{
    if (right.alg() != left.alg())
        throw InputError("tensor: modules over different algebras");
    if (right.side() != Side::right || left.side() != Side::left)
        throw InputError("tensor: needs a right module and a left module");
    const Field<K>& field = right.field();
    const Index dm = right.dim(), dn = left.dim(), n = dm * dn;
    std::vector<Mat<K>> rel;
    for (Index g : right.alg()->generators())
        rel.push_back(Mat<K>(kron<K>(right.act(g), eye(field, dn)) - kron<K>(eye(field, dm), left.act(g))));
    Subspace<K> relations = rel.empty() || n == 0 ? Subspace<K>(n) : Subspace<K>::span(hcat(rel, n), n);
    return Tensor<K>{dm, dn, Quotient<K>(relations, field.one())};
}

template <class K>
TensorModule<K> tensor(const Bimodule<K>& b, const Module<K>& m)
{
    Tensor<K> t = tensor_space(b.right_module(), m);
    const Mat<K> id = eye(m.field(), m.dim());
    std::vector<Mat<K>> act;
    for (const auto& l : b.lact)
        act.push_back(t.induced(l, id, t));
    Module<K> out(b.left_alg, t.dim(), std::move(act));
    return {out, std::move(t)};
}

template <class K>
Mat<K> tensor_map(const TensorModule<K>& src, const TensorModule<K>& dst, const Mat<K>& f, const Mat<K>& g)
{
    return src.t.induced(f, g, dst.t);
}

template <class K>
Induced<K> induce(const AlgebraMorphism<K>& f, const Module<K>& m)
{
    if (m.side() != Side::left)
        throw InputError("induce: needs a left module");
    if (m.alg() != f.source)
        throw InputError("induce: module is not over the source of '" + f.name + "'");
    Bimodule<K> b = algebra_bimodule(identity_morphism(f.target), f);
    Induced<K> out{tensor(b, m), {}};
    out.canonical = zeros(m.field(), out.tm.module.dim(), m.dim());
    for (Index j = 0; j < m.dim(); ++j) {
        Vec<K> ej = zeros(m.field(), m.dim(), 1);
        ej(j) = m.field().one();
        out.canonical.col(j) = out.tm.t.pure(f.target->unit(), ej);
    }
    return out;
}

template <class K>
Mat<K> extend_along(const Induced<K>& ind, const Module<K>& n, const Mat<K>& g)
{
    const Tensor<K>& t = ind.tm.t;
    const Index db = t.left_dim, dm = t.right_dim;
    if (g.rows() != n.dim() || g.cols() != dm)
        throw InputError("extend_along: map of wrong shape");
    Mat<K> plain = zeros(n.field(), n.dim(), db * dm);
    for (Index b = 0; b < db; ++b)
        for (Index j = 0; j < dm; ++j)
            plain.col(b * dm + j) = n.act(b) * g.col(j);
    if (!is_zero<K>(Mat<K>(plain * t.q.relations().basis())))
        throw HardFailure("extend_along: map is not balanced");
    return plain * t.q.section();
}

template <class K>
Dual<K> right_dual(const Bimodule<K>& b)
{
    const auto& a2 = b.right_alg;
    HomSpace<K> h = hom_space(b.right_module(), regular_module(a2, Side::right));
    Dual<K> d;
    d.functionals = h.basis();
    const Index n = h.dim();
    d.bimodule = Bimodule<K>{a2, b.left_alg, n, {}, {}};
    for (Index i = 0; i < a2->dim(); ++i) {
        Mat<K> l = zeros(a2->field(), n, n);
        for (Index k = 0; k < n; ++k)
            l.col(k) = h.coords(Mat<K>(a2->left(i) * d.functionals[k]));
        d.bimodule.lact.push_back(std::move(l));
    }
    for (Index i = 0; i < b.left_alg->dim(); ++i) {
        Mat<K> r = zeros(a2->field(), n, n);
        for (Index k = 0; k < n; ++k) {
            Mat<K> g = d.functionals[k] * b.lact[i];
            if (!h.contains(g))
                throw HardFailure("dual: f(a x) is not right linear");
            r.col(k) = h.coords(g);
        }
        d.bimodule.ract.push_back(std::move(r));
    }
    Diagnostics diag = validate_bimodule(d.bimodule);
    if (!diag.ok())
        throw HardFailure("dual bimodule: " + diag.first());
    return d;
}

template <class K>
Evaluation<K> evaluation(const Dual<K>& dual, const Bimodule<K>& b)
{
    const auto& a2 = *b.right_alg;
    if (dual.bimodule.right_alg != b.left_alg || dual.bimodule.left_alg != b.right_alg)
        throw InputError("evaluation: dual does not match the bimodule");
    Evaluation<K> ev;
    ev.t = tensor_space(dual.bimodule.right_module(), b.left_module());
    const Index nd = dual.bimodule.dim, nb = b.dim;
    Mat<K> plain = zeros(a2.field(), a2.dim(), nd * nb);
    for (Index i = 0; i < nd; ++i)
        for (Index j = 0; j < nb; ++j)
            plain.col(i * nb + j) = dual.functionals[i].col(j);
    if (!is_zero<K>(Mat<K>(plain * ev.t.q.relations().basis())))
        throw HardFailure("evaluation is not balanced over the middle algebra");
    for (Index i = 0; i < a2.dim(); ++i) {
        if (!(Mat<K>(plain * kron<K>(dual.bimodule.lact[i], eye(a2.field(), nb))) == Mat<K>(a2.left(i) * plain)))
            throw HardFailure("evaluation is not left linear at " + a2.name(i));
        if (!(Mat<K>(plain * kron<K>(eye(a2.field(), nd), b.ract[i])) == Mat<K>(a2.right(i) * plain)))
            throw HardFailure("evaluation is not right linear at " + a2.name(i));
    }
    ev.mat = plain * ev.t.q.section();
    return ev;
}

template <class K>
SubModule<K> submodule(const Module<K>& m, const Subspace<K>& v)
{
    std::vector<Mat<K>> act;
    for (Index i = 0; i < m.alg()->dim(); ++i) {
        Mat<K> img = m.act(i) * v.basis();
        if (!v.contains(img))
            throw HardFailure("submodule: subspace is not invariant under " + m.alg()->name(i));
        act.push_back(v.coords(img));
    }
    Mat<K> inc = v.basis();
    if (inc.cols() == 0)
        inc = zeros(m.field(), m.dim(), 0);
    return {Module<K>(m.alg(), v.dim(), std::move(act), m.side()), inc};
}

template <class K>
QuotientModule<K> quotient_module(const Module<K>& m, const Subspace<K>& v)
{
    Quotient<K> q(v, m.field().one());
    std::vector<Mat<K>> act;
    for (Index i = 0; i < m.alg()->dim(); ++i) {
        if (!v.contains(Mat<K>(m.act(i) * v.basis())))
            throw HardFailure("quotient: subspace is not invariant under " + m.alg()->name(i));
        act.push_back(q.project() * m.act(i) * q.section());
    }
    return {Module<K>(m.alg(), q.dim(), std::move(act), m.side()), q.project(), q.section()};
}

template <class K>
SubModule<K> kernel(const ModuleMorphism<K>& f)
{
    return submodule(f.source, Subspace<K>::kernel(f.mat, f.source.field().one()));
}

template <class K>
SubModule<K> image(const ModuleMorphism<K>& f)
{
    return submodule(f.target, Subspace<K>::span(f.mat, f.target.dim()));
}

template <class K>
QuotientModule<K> cokernel(const ModuleMorphism<K>& f)
{
    return quotient_module(f.target, Subspace<K>::span(f.mat, f.target.dim()));
}

template <class K>
DirectSum<K> direct_sum(const std::vector<Module<K>>& parts)
{
    if (parts.empty())
        throw InputError("direct_sum: empty list");
    const auto& alg = parts.front().alg();
    const Field<K>& field = alg->field();
    Index total = 0;
    for (const auto& p : parts) {
        if (p.alg() != alg || p.side() != parts.front().side())
            throw InputError("direct_sum: summands over different algebras or sides");
        total += p.dim();
    }
    std::vector<Mat<K>> act;
    for (Index i = 0; i < alg->dim(); ++i) {
        std::vector<Mat<K>> blocks;
        for (const auto& p : parts)
            blocks.push_back(p.act(i));
        act.push_back(total ? block_diagonal(blocks) : Mat<K>(0, 0));
    }
    DirectSum<K> out{Module<K>(alg, total, std::move(act), parts.front().side()), {}, {}};
    Index at = 0;
    for (const auto& p : parts) {
        Mat<K> inc = zeros(field, total, p.dim());
        inc.block(at, 0, p.dim(), p.dim()) = eye(field, p.dim());
        out.projections.push_back(Mat<K>(inc.transpose()));
        out.inclusions.push_back(std::move(inc));
        at += p.dim();
    }
    return out;
}

template <class K>
Subspace<K> generated_submodule(const Module<K>& m, const Mat<K>& gens)
{
    if (gens.cols() == 0)
        return Subspace<K>(m.dim());
    std::vector<Mat<K>> blocks;
    for (Index i = 0; i < m.alg()->dim(); ++i)
        blocks.push_back(m.act(i) * gens);
    return Subspace<K>::span(hcat(blocks, m.dim()), m.dim());
}

template <class K>
Mat<K> greedy_generators(const Module<K>& m)
{
    std::vector<Index> picked;
    Subspace<K> cur(m.dim());
    Mat<K> id = eye(m.field(), m.dim());
    for (Index j = 0; j < m.dim() && cur.dim() < m.dim(); ++j) {
        if (cur.contains(Mat<K>(id.col(j))))
            continue;
        picked.push_back(j);
        Mat<K> g(m.dim(), static_cast<Index>(picked.size()));
        for (std::size_t k = 0; k < picked.size(); ++k)
            g.col(static_cast<Index>(k)) = id.col(picked[k]);
        cur = generated_submodule(m, g);
    }
    Mat<K> g = zeros(m.field(), m.dim(), static_cast<Index>(picked.size()));
    for (std::size_t k = 0; k < picked.size(); ++k)
        g.col(static_cast<Index>(k)) = id.col(picked[k]);
    return g;
}

template <class K>
FreeCover<K> free_cover(const Module<K>& m, const Mat<K>& generators)
{
    const auto& a = m.alg();
    const Index g = generators.cols(), da = a->dim();
    FreeCover<K> out{free_module(a, g), zeros(m.field(), m.dim(), da * g), generators};
    for (Index j = 0; j < g; ++j)
        for (Index i = 0; i < da; ++i)
            out.map.col(j * da + i) = m.act(i) * generators.col(j);
    return out;
}

template <class K>
Projectivity<K> is_projective(const Module<K>& m)
{
    Projectivity<K> out;
    out.cover = free_cover(m, greedy_generators(m));
    if (m.dim() == 0) {
        out.projective = true;
        out.section = zeros(m.field(), out.cover.free.dim(), 0);
        return out;
    }
    HomSpace<K> h = hom_space(m, out.cover.free);
    const Index n = m.dim();
    Mat<K> sys = zeros(m.field(), n * n, h.dim());
    for (Index k = 0; k < h.dim(); ++k)
        sys.col(k) = vectorize<K>(Mat<K>(out.cover.map * h.element(k)));
    Vec<K> rhs = vectorize<K>(eye(m.field(), n));
    auto sol = solve<K>(sys, rhs);
    if (!sol.particular)
        return out;
    out.section = h.combine(*sol.particular);
    if (!(Mat<K>(out.cover.map * out.section) == eye(m.field(), n)) || !is_morphism(m, out.cover.free, out.section))
        throw HardFailure("projectivity witness failed verification");
    out.projective = true;
    return out;
}

template <class K>
Subspace<K> radical_submodule(const Module<K>& m)
{
    const auto& j = m.alg()->radical().space;
    if (j.dim() == 0 || m.dim() == 0)
        return Subspace<K>(m.dim());
    std::vector<Mat<K>> blocks;
    for (Index k = 0; k < j.dim(); ++k)
        blocks.push_back(m.act_of(j.basis().col(k)));
    return Subspace<K>::span(hcat(blocks, m.dim()), m.dim());
}

template <class K>
ProjectiveCover<K> projective_cover(const Module<K>& m)
{
    const auto& a = m.alg();
    const auto& info = a->idempotents();
    const std::vector<Index> reps = info.representatives();
    const Subspace<K> jm = radical_submodule(m);
    Subspace<K> cur = jm;
    ProjectiveCover<K> out;
    out.multiplicity.assign(reps.size(), 0);
    std::vector<Module<K>> parts;
    std::vector<Vec<K>> images;
    for (std::size_t c = 0; c < reps.size(); ++c) {
        const Vec<K>& e = info.idems[reps[c]];
        const Mat<K> em = m.act_of(e);
        const Index e_top = Subspace<K>::span(em, m.dim()).sum(jm).dim() - jm.dim();
        Index count = 0;
        for (Index col = 0; col < em.cols(); ++col) {
            Vec<K> x = em.col(col);
            if (cur.contains(Mat<K>(x)))
                continue;
            cur = cur.sum(generated_submodule(m, Mat<K>(x)));
            parts.push_back(projective_module(a, e));
            images.push_back(x);
            out.summands.push_back(reps[c]);
            ++count;
        }
        if (count * info.end_dim[reps[c]] != e_top)
            throw HardFailure("projective cover: multiplicity " + std::to_string(count) + " does not match dim(e top) = " +
                              std::to_string(e_top) + " / " + std::to_string(info.end_dim[reps[c]]));
        out.multiplicity[c] = count;
    }
    if (cur.dim() != m.dim())
        throw HardFailure("projective cover: chosen generators do not span the top");
    if (parts.empty()) {
        out.projective = zero_module(a);
        out.map = zeros(m.field(), m.dim(), 0);
        return out;
    }
    DirectSum<K> p = direct_sum(parts);
    out.projective = p.module;
    out.map = zeros(m.field(), m.dim(), p.module.dim());
    Index at = 0;
    for (std::size_t s = 0; s < parts.size(); ++s) {
        Subspace<K> ae = Subspace<K>::span(a->right_mult(info.idems[out.summands[s]]), a->dim());
        for (Index k = 0; k < ae.dim(); ++k)
            out.map.col(at + k) = m.act_of(ae.basis().col(k)) * images[s];
        at += ae.dim();
    }
    if (!is_morphism(out.projective, m, out.map) || rank<K>(out.map) != m.dim())
        throw HardFailure("projective cover map is not an epimorphism of modules");
    if (!radical_submodule(out.projective).contains(Subspace<K>::kernel(out.map)))
        throw HardFailure("projective cover kernel is not inside rad P");
    return out;
}

template <class K>
Ext1<K> ext1(const Module<K>& m, const Module<K>& n, const std::optional<Mat<K>>& generators)
{
    if (m.alg() != n.alg())
        throw InputError("ext1: modules over different algebras");
    const auto& a = *m.alg();
    FreeCover<K> cover = free_cover(m, generators ? *generators : greedy_generators(m));
    if (generated_submodule(m, cover.generators).dim() != m.dim())
        throw InputError("ext1: the given elements do not generate the module");
    Ext1<K> out;
    out.syzygy = kernel(ModuleMorphism<K>{cover.free, m, cover.map});
    HomSpace<K> h = hom_space(out.syzygy.module, n);
    const Index g = cover.generators.cols(), da = a.dim();
    std::vector<Vec<K>> img;
    for (Index j = 0; j < g; ++j)
        for (Index l = 0; l < n.dim(); ++l) {
            Mat<K> f = zeros(m.field(), n.dim(), cover.free.dim());
            for (Index i = 0; i < da; ++i)
                f.col(j * da + i) = n.act(i).col(l);
            Mat<K> r = f * out.syzygy.inclusion;
            if (!h.contains(r))
                throw HardFailure("ext1: restricted map is not a module map");
            img.push_back(h.coords(r));
        }
    Subspace<K> image_space(h.dim());
    if (!img.empty() && h.dim() > 0) {
        Mat<K> cols(h.dim(), static_cast<Index>(img.size()));
        for (std::size_t k = 0; k < img.size(); ++k)
            cols.col(static_cast<Index>(k)) = img[k];
        image_space = Subspace<K>::span(cols, h.dim());
    }
    out.dim = h.dim() - image_space.dim();
    Quotient<K> q(image_space, m.field().one());
    for (Index k = 0; k < q.dim(); ++k)
        out.cocycles.push_back(h.combine(q.section().col(k)));
    return out;
}

template <class K>
bool pd_at_most(const Module<K>& m, int n)
{
    Module<K> cur = m;
    for (int level = 0; level <= n; ++level) {
        if (is_projective(cur).projective)
            return true;
        if (level == n)
            break;
        FreeCover<K> cover = free_cover(cur, greedy_generators(cur));
        cur = kernel(ModuleMorphism<K>{cover.free, cur, cover.map}).module;
    }
    return false;
}

template <class K>
IsoResult<K> iso_test(const Module<K>& m, const Module<K>& n, std::uint64_t seed)
{
    IsoResult<K> out;
    if (m.dim() != n.dim()) {
        out.verdict = IsoVerdict::not_isomorphic;
        out.reason = "dimensions differ (" + std::to_string(m.dim()) + " vs " + std::to_string(n.dim()) + ")";
        return out;
    }
    if (m.dim() == 0) {
        out.verdict = IsoVerdict::isomorphic;
        out.iso = Mat<K>(0, 0);
        out.reason = "zero modules";
        return out;
    }
    HomSpace<K> h = hom_space(m, n);
    SearchOptions opts;
    opts.seed = seed;
    SpanSearch<K> s = invertible_in_span(h.basis(), m.field(), opts);
    if (s.found()) {
        out.verdict = IsoVerdict::isomorphic;
        out.iso = s.element;
        out.reason = "invertible element of Hom found";
        return out;
    }
    if (s.verdict == SearchVerdict::none_exhaustive) {
        out.verdict = IsoVerdict::not_isomorphic;
        out.reason = "no invertible element in Hom (exhaustive search)";
        return out;
    }
    const Index hmm = hom_space(m, m).dim(), hnn = hom_space(n, n).dim();
    if (hmm != hnn || hmm != h.dim()) {
        out.verdict = IsoVerdict::not_isomorphic;
        out.reason = "Hom dimensions obstruct (" + std::to_string(hmm) + ", " + std::to_string(hnn) + ", " +
                     std::to_string(h.dim()) + ")";
        return out;
    }
    out.verdict = IsoVerdict::inconclusive;
    out.reason = "no invertible element found among sampled combinations";
    return out;
}

#define PHL_INSTANTIATE_MODREP(K)                                                                           \
    template class Module<K>;                                                                               \
    template struct HomSpace<K>;                                                                            \
    template struct Tensor<K>;                                                                              \
    template Diagnostics validate_module<K>(const Module<K>&);                                              \
    template Module<K> make_module<K>(AlgebraPtr<K>, Index, std::vector<Mat<K>>, Side);                     \
    template bool is_morphism<K>(const Module<K>&, const Module<K>&, const Mat<K>&);                        \
    template Diagnostics validate_bimodule<K>(const Bimodule<K>&);                                          \
    template Module<K> regular_module<K>(const AlgebraPtr<K>&, Side);                                       \
    template Module<K> zero_module<K>(const AlgebraPtr<K>&, Side);                                          \
    template Module<K> free_module<K>(const AlgebraPtr<K>&, Index);                                         \
    template Module<K> projective_module<K>(const AlgebraPtr<K>&, const Vec<K>&);                           \
    template Module<K> restrict_along<K>(const AlgebraMorphism<K>&, const Module<K>&);                      \
    template Bimodule<K> algebra_bimodule<K>(const AlgebraMorphism<K>&, const AlgebraMorphism<K>&);         \
    template Bimodule<K> regular_bimodule<K>(const AlgebraPtr<K>&);                                         \
    template HomSpace<K> hom_space<K>(const Module<K>&, const Module<K>&);                                  \
    template Tensor<K> tensor_space<K>(const Module<K>&, const Module<K>&);                                 \
    template TensorModule<K> tensor<K>(const Bimodule<K>&, const Module<K>&);                               \
    template Mat<K> tensor_map<K>(const TensorModule<K>&, const TensorModule<K>&, const Mat<K>&,            \
                                  const Mat<K>&);                                                           \
    template Induced<K> induce<K>(const AlgebraMorphism<K>&, const Module<K>&);                             \
    template Mat<K> extend_along<K>(const Induced<K>&, const Module<K>&, const Mat<K>&);                    \
    template Dual<K> right_dual<K>(const Bimodule<K>&);                                                     \
    template Evaluation<K> evaluation<K>(const Dual<K>&, const Bimodule<K>&);                               \
    template SubModule<K> submodule<K>(const Module<K>&, const Subspace<K>&);                               \
    template QuotientModule<K> quotient_module<K>(const Module<K>&, const Subspace<K>&);                    \
    template SubModule<K> kernel<K>(const ModuleMorphism<K>&);                                              \
    template SubModule<K> image<K>(const ModuleMorphism<K>&);                                               \
    template QuotientModule<K> cokernel<K>(const ModuleMorphism<K>&);                                       \
    template DirectSum<K> direct_sum<K>(const std::vector<Module<K>>&);                                     \
    template Subspace<K> generated_submodule<K>(const Module<K>&, const Mat<K>&);                           \
    template Mat<K> greedy_generators<K>(const Module<K>&);                                                 \
    template FreeCover<K> free_cover<K>(const Module<K>&, const Mat<K>&);                                   \
    template Projectivity<K> is_projective<K>(const Module<K>&);                                            \
    template Subspace<K> radical_submodule<K>(const Module<K>&);                                            \
    template ProjectiveCover<K> projective_cover<K>(const Module<K>&);                                      \
    template Ext1<K> ext1<K>(const Module<K>&, const Module<K>&, const std::optional<Mat<K>>&);              \
    template bool pd_at_most<K>(const Module<K>&, int);                                                     \
    template IsoResult<K> iso_test<K>(const Module<K>&, const Module<K>&, std::uint64_t);

PHL_INSTANTIATE_MODREP(Rational)
PHL_INSTANTIATE_MODREP(Fp)

} // namespace phl
