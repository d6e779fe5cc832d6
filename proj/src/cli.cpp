#include "phl/cli.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "phl/derived.hpp"
#include "phl/bundled_scenarios.hpp"

namespace phl {

const std::vector<std::string>& commands()
{
    static const std::vector<std::string> names{"validate", "pullback", "milnor",         "separated", "gamma",
                                                "tilting",  "derived",  "counterexample", "run"};
    return names;
}

namespace {

template <class K>
struct Built
{
    Field<K> field;
    std::map<std::string, AlgebraPtr<K>> algebras;
    std::map<std::string, AlgebraMorphism<K>> morphisms;
    std::map<std::string, Module<K>> modules;
    std::map<std::string, Complex<K>> complexes;
    std::optional<PullbackData<K>> data;
    Check validation;
};

template <class K>
Mat<K> to_matrix(const Field<K>& f, const TokenMatrix& rows, Index nrows, Index ncols)
{
    Mat<K> m = zeros(f, nrows, ncols);
    for (Index i = 0; i < nrows; ++i)
        for (Index j = 0; j < ncols; ++j)
            m(i, j) = f.parse(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].text);
    return m;
}

template <class K>
std::string radical_summary(const Algebra<K>& a)
{
    if (!a.has_radical())
        return "radical not available";
    const RadicalInfo<K>& r = a.radical();
    Nilpotency n = is_nilpotent_ideal(a, r.space);
    std::string s = "radical dim " + std::to_string(r.space.dim()) + " (" + to_string(r.source) +
                    ", quotient semisimple: " + to_string(r.maximality) + ", nilpotency index " +
                    std::to_string(n.index) + ")";
    if (a.has_idempotents())
        s += "; primitive idempotents " + std::to_string(a.idempotents().idems.size()) + ", iso classes " +
             std::to_string(a.idempotents().class_count());
    return s;
}

/// Nilpotent radical and, for split-basic or trace-form maximality, a
/// certified semisimple quotient.
template <class K>
bool radical_holds(const AlgebraPtr<K>& a)
{
    return !a->has_radical() || is_nilpotent_ideal(*a, a->radical().space).nilpotent;
}

template <class K>
Built<K> build(const Scenario& sc, const Field<K>& f)
{
    Built<K> b{f, {}, {}, {}, {}, {}, {}};
    b.validation.id = "validate";
    auto rethrow = [](const Token& at, const std::string& what) { throw ScenarioError(at.pos, what); };

    for (const auto& spec : sc.algebras) {
        const Index n = static_cast<Index>(spec.basis.size());
        std::vector<Mat<K>> left(static_cast<std::size_t>(n), zeros(f, n, n));
        std::set<std::tuple<Index, Index, Index>> seen;
        for (const auto& c : spec.constants) {
            if (!seen.insert({c.i, c.j, c.k}).second)
                rethrow(c.value, "duplicate structure constant (" + std::to_string(c.i) + "," + std::to_string(c.j) +
                                     "," + std::to_string(c.k) + ")");
            left[static_cast<std::size_t>(c.i)](c.k, c.j) = f.parse(c.value.text);
        }
        Vec<K> unit = zeros(f, n, 1);
        for (Index i = 0; i < n; ++i)
            unit(i) = f.parse(spec.unit[static_cast<std::size_t>(i)].text);
        Diagnostics d = validate_algebra(f, left, unit);
        if (!d.ok())
            rethrow(spec.name, "algebra " + spec.name.text + ": " + d.first());
        EquipOptions<K> eo;
        if (spec.radical)
            eo.radical = Mat<K>(to_matrix(f, *spec.radical, static_cast<Index>(spec.radical->size()), n).transpose());
        if (spec.idempotents) {
            std::vector<Vec<K>> es;
            for (const auto& row : *spec.idempotents)
                es.push_back(Vec<K>(to_matrix(f, {row}, 1, n).transpose()));
            eo.idempotents = es;
        }
        std::vector<std::string> names;
        for (const auto& t : spec.basis)
            names.push_back(t.text);
        AlgebraPtr<K> a;
        try {
            a = make_algebra<K>(f, names, left, unit, eo);
        } catch (const InputError& e) {
            rethrow(spec.name, "algebra " + spec.name.text + ": " + e.what());
        }
        b.algebras[spec.name.text] = a;
        b.validation.add("algebra " + spec.name.text + ": dim " + std::to_string(n) +
                         ", associative and unital; " + radical_summary(*a));
        b.validation.certify([a]() { return radical_holds(a); });
        if (!radical_holds(a))
            b.validation.fail("radical of " + spec.name.text + " is not nilpotent");
    }
    for (const auto& spec : sc.morphisms) {
        AlgebraPtr<K> s = b.algebras.at(spec.source.text), t = b.algebras.at(spec.target.text);
        AlgebraMorphism<K> m{s, t, to_matrix(f, spec.rows, t->dim(), s->dim()), spec.name.text};
        Diagnostics d = validate_morphism(m);
        if (!d.ok())
            rethrow(spec.name, "morphism " + spec.name.text + ": " + d.first());
        b.morphisms.emplace(spec.name.text, m);
        b.validation.add("morphism " + spec.name.text + ": " + spec.source.text + " -> " + spec.target.text +
                         " unital and multiplicative" + (is_surjective(m) ? ", surjective" : ""));
    }
    for (const auto& spec : sc.modules) {
        AlgebraPtr<K> a = b.algebras.at(spec.algebra.text);
        std::vector<Mat<K>> act;
        for (Index i = 0; i < a->dim(); ++i)
            act.push_back(spec.dim == 0 ? zeros(f, 0, 0) : to_matrix(f, spec.act.at(i), spec.dim, spec.dim));
        try {
            b.modules.emplace(spec.name.text, make_module<K>(a, spec.dim, act));
        } catch (const InputError& e) {
            rethrow(spec.name, "module " + spec.name.text + ": " + e.what());
        }
        b.validation.add("module " + spec.name.text + " over " + spec.algebra.text + ": dim " +
                         std::to_string(spec.dim) + ", action law holds");
    }
    for (const auto& spec : sc.complexes) {
        AlgebraPtr<K> a = b.algebras.at(spec.algebra.text);
        std::vector<Module<K>> terms;
        for (const auto& t : spec.terms)
            terms.push_back(b.modules.at(t.text));
        std::vector<Mat<K>> diffs;
        for (std::size_t k = 0; k + 1 < terms.size(); ++k)
            diffs.push_back(to_matrix(f, spec.diffs.at(spec.lo + static_cast<int>(k)), terms[k + 1].dim(),
                                      terms[k].dim()));
        try {
            Complex<K> x(a, spec.lo, terms, diffs);
            b.complexes.emplace(spec.name.text, x);
            b.validation.certify([x]() {
                for (int n = x.lo(); n < x.hi(); ++n)
                    if (!is_zero<K>(Mat<K>(x.d(n + 1) * x.d(n))))
                        return false;
                return true;
            });
        } catch (const InputError& e) {
            rethrow(spec.name, "complex " + spec.name.text + ": " + e.what());
        }
        b.validation.add("complex " + spec.name.text + " over " + spec.algebra.text + ": degrees " +
                         std::to_string(spec.lo) + ".." + std::to_string(spec.lo + static_cast<int>(terms.size()) - 1) +
                         ", module maps with d d = 0");
    }
    if (sc.diagram) {
        const auto& [p1, p2] = *sc.diagram;
        try {
            b.data = pullback(b.morphisms.at(p1.text), b.morphisms.at(p2.text));
        } catch (const InputError& e) {
            rethrow(p1, std::string("pullback: ") + e.what());
        }
        Diagnostics d = verify_pullback(*b.data);
        if (!d.ok())
            b.validation.absorb(d, "pullback: ");
        AlgebraPtr<K> r = b.data->R();
        b.validation.add("pullback R: dim " + std::to_string(r->dim()) + "; " + radical_summary(*r));
        b.validation.certify([r]() { return radical_holds(r); });
        if (!radical_holds(r))
            b.validation.fail("radical of R is not nilpotent");
    }
    return b;
}

template <class K>
Check pullback_report(const PullbackData<K>& d)
{
    Check c;
    c.id = "pullback";
    const Algebra<K>& r = *d.R();
    c.add("dim R = " + std::to_string(r.dim()) + " (dim R1 = " + std::to_string(d.R1()->dim()) +
          ", dim R2 = " + std::to_string(d.R2()->dim()) + ", dim R' = " + std::to_string(d.Rp()->dim()) + ")");
    for (Index k = 0; k < r.dim(); ++k)
        c.add(r.name(k) + " = (" + d.R1()->describe(d.i1.mat.col(k)) + ", " + d.R2()->describe(d.i2.mat.col(k)) + ")");
    c.add(std::string("pi1 surjective: ") + (is_surjective(d.pi1) ? "yes" : "no") +
          "; pi2 surjective: " + (is_surjective(d.pi2) ? "yes" : "no"));
    c.add(radical_summary(r));
    Diagnostics v = verify_pullback(d);
    c.absorb(v);
    if (v.ok())
        c.add("R = {(a, b) : pi1(a) = pi2(b)} with i1, i2 unital algebra maps");
    c.witness("i1 =\n" + to_string<K>(d.i1.mat));
    c.witness("i2 =\n" + to_string<K>(d.i2.mat));
    c.certify([d]() { return verify_pullback(d).ok(); });
    return c;
}

template <class K>
Vec<K> default_twist(const PullbackData<K>& d)
{
    const Algebra<K>& rp = *d.Rp();
    if (!rp.has_radical() || rp.radical().space.dim() == 0)
        throw HypothesisRefused("R' has zero radical, so no unipotent twist 1 + t is available");
    return Vec<K>(rp.unit() + rp.radical().space.basis().col(0));
}

template <class K>
Vec<K> parse_twist(const PullbackData<K>& d, const Token& t)
{
    const Field<K>& f = d.Rp()->field();
    std::vector<K> parts;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = t.text.find(',', start);
        parts.push_back(f.parse(t.text.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    if (static_cast<Index>(parts.size()) != d.Rp()->dim())
        throw ScenarioError(t.pos, "twist has " + std::to_string(parts.size()) + " entries, R' has dimension " +
                                       std::to_string(d.Rp()->dim()));
    Vec<K> v(d.Rp()->dim());
    for (Index i = 0; i < v.size(); ++i)
        v(i) = parts[static_cast<std::size_t>(i)];
    return v;
}

/// Parameters of the named check: scenario values, then command-line overrides.
struct Params
{
    std::map<std::string, Token> raw;
    const RunOptions* o = nullptr;

    std::uint64_t num(const std::string& key, std::uint64_t fallback) const
    {
        auto it = raw.find(key);
        return it == raw.end() ? fallback : std::stoull(it->second.text);
    }
    int samples(int fallback) const { return o->samples ? *o->samples : static_cast<int>(num("samples", fallback)); }
    std::uint64_t seed() const { return o->seed ? *o->seed : num("seed", 1); }
    Index max_dim(Index fallback) const { return o->max_dim ? *o->max_dim : static_cast<Index>(num("max_dim", fallback)); }
};

template <class F>
Check guarded(const std::string& id, F&& body)
{
    try {
        return body();
    } catch (const ScenarioError&) {
        throw;
    } catch (const HypothesisRefused& e) {
        Check c;
        c.id = id;
        c.refuse(e.what());
        return c;
    } catch (const HardFailure& e) {
        Check c;
        c.id = id;
        c.fail(e.what());
        return c;
    }
}

template <class K>
std::vector<Check> run_check(const Built<K>& b, const std::string& name, const Params& p)
{
    if (name == "validate")
        return {b.validation};
    const PullbackData<K>& d = *b.data;
    if (name == "pullback")
        return {pullback_report(d)};
    if (name == "milnor")
        return {guarded("milnor", [&] {
            MilnorOptions mo;
            mo.dim_bound = p.o->dim_bound ? *p.o->dim_bound : static_cast<Index>(p.num("dim_bound", mo.dim_bound));
            mo.samples = p.samples(mo.samples);
            mo.seed = p.seed();
            mo.ceiling = p.num("ceiling", mo.ceiling);
            return milnor_check(d, mo);
        })};
    SampleOptions so;
    so.samples = p.samples(so.samples);
    so.seed = p.seed();
    so.max_dim = p.max_dim(so.max_dim);
    if (name == "lemmas")
        return {guarded("lemmas", [&] { return lemma_suite(d, so); })};
    if (name == "separated")
        return {guarded("separated", [&] { return separated_equiv_check(d, so); })};
    if (name == "gamma")
        return {guarded("gamma", [&] { return gamma_check(d, so); })};
    if (name == "tilting")
        return {guarded("tilting", [&] { return tilting_check(d); })};
    if (name == "counterexample")
        return {guarded("counterexample", [&] {
            auto t = p.raw.find("twist");
            return counterexample_check(d, t == p.raw.end() ? default_twist(d) : parse_twist(d, t->second));
        })};
    if (name == "derived") {
        SuiteOptions o;
        o.seeds = p.samples(o.seeds);
        o.seed = p.seed();
        o.complexes.max_support = p.o->max_support ? *p.o->max_support
                                                   : static_cast<int>(p.num("max_support", o.complexes.max_support));
        o.complexes.max_dim = p.max_dim(o.complexes.max_dim);
        try {
            return epivalence_suite(d, o);
        } catch (const HypothesisRefused& e) {
            Check c;
            c.id = "derived";
            c.refuse(e.what());
            return {c};
        } catch (const HardFailure& e) {
            Check c;
            c.id = "derived";
            c.fail(e.what());
            return {c};
        }
    }
    throw InputError("unknown check '" + name + "'");
}

/// `expect=refused`: at least one of the check's results is a refusal, and
/// the refusals are then recorded as expected.
void apply_expectation(std::vector<Check>& cs, const std::string& expect)
{
    if (expect != "refused" || cs.empty())
        return;
    bool any = false;
    for (auto& c : cs)
        if (c.status == Status::refused) {
            c.status = Status::info;
            c.add("refusal expected by the scenario");
            any = true;
        }
    if (!any)
        cs.front().fail("expected a hypothesis refusal");
}

template <class K>
Report run_typed(const std::string& command, const Scenario& sc, const Field<K>& f, const RunOptions& o)
{
    Built<K> b = build(sc, f);
    Report r;
    r.title = (sc.title ? *sc.title : sc.source) + ": " + command;
    auto params = [&](const std::string& name) {
        Params p;
        p.o = &o;
        for (const auto& c : sc.checks)
            if (c.name.text == name)
                p.raw = c.params;
        return p;
    };
    auto need_diagram = [&] {
        if (!b.data)
            throw InputError("command '" + command + "' needs a scenario with a 'diagram' line");
    };
    if (command == "run") {
        for (const auto& spec : sc.checks) {
            Params p;
            p.o = &o;
            p.raw = spec.params;
            auto cs = run_check(b, spec.name.text, p);
            if (auto e = spec.params.find("expect"); e != spec.params.end())
                apply_expectation(cs, e->second.text);
            for (auto& c : cs)
                r.add(std::move(c));
        }
    } else if (command == "validate") {
        r.add(b.validation);
    } else if (command == "separated") {
        need_diagram();
        for (const char* name : {"lemmas", "separated"})
            for (auto& c : run_check(b, name, params(name)))
                r.add(std::move(c));
    } else {
        need_diagram();
        for (auto& c : run_check(b, command, params(command)))
            r.add(std::move(c));
    }
    if (o.recheck) {
        const int total = r.recheck();
        Check c;
        c.id = "recheck";
        c.add(std::to_string(total) + " stored certificates re-verified without search");
        r.add(std::move(c));
    }
    return r;
}

} // namespace

Report run_command(const std::string& command, const Scenario& scenario, const RunOptions& options)
{
    if (std::find(commands().begin(), commands().end(), command) == commands().end())
        throw InputError("unknown command '" + command + "'");
    if (!scenario.field) {
        Report r;
        r.title = (scenario.title ? *scenario.title : scenario.source) + ": " + command;
        if (command == "validate" || command == "run")
            return r;
        throw InputError("command '" + command + "' needs a scenario with a 'field' line");
    }
    if (scenario.field->kind == FieldKind::rationals)
        return run_typed(command, scenario, Field<Rational>{}, options);
    return run_typed(command, scenario, Field<Fp>{scenario.field->p}, options);
}

const std::vector<BundledScenario>& bundled_scenarios()
{
    static const std::vector<BundledScenario> all = [] {
        std::vector<BundledScenario> v;
        for (const auto& [name, text] : bundled::scenarios)
            v.push_back({name, text});
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
        return v;
    }();
    return all;
}

Report selftest(const RunOptions& options)
{
    Report out;
    out.title = "selftest";
    for (const auto& s : bundled_scenarios()) {
        Report r = run_command("run", parse_scenario(s.text, s.name), options);
        for (auto& c : r.checks) {
            c.id = s.name + "/" + c.id;
            out.add(std::move(c));
        }
    }
    return out;
}

} // namespace phl
