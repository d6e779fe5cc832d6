#include "phl/algebra.hpp"

#include <deque>
#include <numeric>
#include <random>
#include <sstream>

namespace phl {

std::string to_string(RadicalSource s)
{
    switch (s) {
    case RadicalSource::trace_form:
        return "trace form";
    case RadicalSource::supplied:
        return "supplied";
    case RadicalSource::construction:
        return "derived from construction";
    }
    return "?";
}

std::string to_string(Maximality m)
{
    switch (m) {
    case Maximality::trace_form:
        return "certified (nondegenerate trace form on the quotient)";
    case Maximality::split_basic:
        return "certified (split basic quotient)";
    case Maximality::asserted:
        return "nilpotent ideal, maximality asserted by input";
    }
    return "?";
}

std::string to_string(Tristate t)
{
    switch (t) {
    case Tristate::yes:
        return "yes";
    case Tristate::no:
        return "no";
    case Tristate::unknown:
        return "unknown";
    }
    return "?";
}

namespace {

template <class K>
using Poly = std::vector<K>;

template <class K>
void trim(Poly<K>& p)
{
    while (!p.empty() && p.back() == K(0))
        p.pop_back();
}

template <class K>
Poly<K> poly_mul(const Poly<K>& a, const Poly<K>& b, const K& zero)
{
    if (a.empty() || b.empty())
        return {};
    Poly<K> r(a.size() + b.size() - 1, zero);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

template <class K>
Poly<K> poly_sub(const Poly<K>& a, const Poly<K>& b, const K& zero)
{
    Poly<K> r(std::max(a.size(), b.size()), zero);
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i)
        r[i] -= b[i];
    trim(r);
    return r;
}

template <class K>
std::pair<Poly<K>, Poly<K>> poly_divmod(Poly<K> a, const Poly<K>& b, const K& zero)
{
    if (b.empty())
        throw std::domain_error("polynomial division by zero");
    if (a.size() < b.size())
        return {{}, a};
    Poly<K> q(a.size() - b.size() + 1, zero);
    const K lead_inv = K(1) / b.back();
    while (a.size() >= b.size() && !a.empty()) {
        const std::size_t shift = a.size() - b.size();
        K c = a.back() * lead_inv;
        q[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i)
            a[shift + i] -= c * b[i];
        a.pop_back();
        trim(a);
    }
    trim(q);
    return {q, a};
}

// Returns (g, u, v) with u a + v b = g.
template <class K>
std::tuple<Poly<K>, Poly<K>, Poly<K>> ext_gcd(Poly<K> a, Poly<K> b, const K& zero, const K& one)
{
    Poly<K> u0{one}, v0{}, u1{}, v1{one};
    while (!b.empty()) {
        auto [q, r] = poly_divmod(a, b, zero);
        Poly<K> u2 = poly_sub(u0, poly_mul(q, u1, zero), zero);
        Poly<K> v2 = poly_sub(v0, poly_mul(q, v1, zero), zero);
        a = std::move(b);
        b = std::move(r);
        u0 = std::move(u1);
        u1 = std::move(u2);
        v0 = std::move(v1);
        v1 = std::move(v2);
    }
    return {a, u0, v0};
}

template <class K>
K poly_eval(const Poly<K>& p, const K& x, const K& zero)
{
    K r = zero;
    for (std::size_t i = p.size(); i-- > 0;)
        r = r * x + p[i];
    return r;
}

std::vector<mpz_class> divisors(mpz_class n)
{
    std::vector<mpz_class> out;
    n = abs(n);
    if (n == 0 || n > 1000000)
        return out;
    const unsigned long m = n.get_ui();
    for (unsigned long d = 1; d <= m; ++d)
        if (m % d == 0)
            out.emplace_back(d);
    return out;
}

std::vector<Rational> roots(const Poly<Rational>& p, const Field<Rational>&)
{
    std::vector<Rational> out;
    if (p.size() < 2)
        return out;
    std::size_t low = 0;
    while (low < p.size() && p[low].is_zero())
        ++low;
    if (low > 0)
        out.push_back(Rational(0));
    mpz_class l = 1;
    for (const auto& c : p)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.denominator().get_mpz_t());
    std::vector<mpz_class> ints;
    for (std::size_t i = low; i < p.size(); ++i)
        ints.push_back(p[i].numerator() * (l / p[i].denominator()));
    if (ints.size() < 2)
        return out;
    for (const auto& num : divisors(ints.front()))
        for (const auto& den : divisors(ints.back()))
            for (int sign : {1, -1}) {
                Rational cand(mpq_class(num * sign, den));
                if (poly_eval(p, cand, Rational(0)).is_zero() &&
                    std::find(out.begin(), out.end(), cand) == out.end())
                    out.push_back(cand);
            }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Fp> roots(const Poly<Fp>& p, const Field<Fp>& f)
{
    std::vector<Fp> out;
    if (p.size() < 2 || f.order() > (1u << 16))
        return out;
    for (std::uint64_t i = 0; i < f.order(); ++i)
        if (poly_eval(p, f.element(i), f.zero()).is_zero())
            out.push_back(f.element(i));
    return out;
}

template <class K>
Mat<K> columns(const std::vector<Vec<K>>& vs, Index n)
{
    Mat<K> m(n, static_cast<Index>(vs.size()));
    for (std::size_t i = 0; i < vs.size(); ++i)
        m.col(static_cast<Index>(i)) = vs[i];
    return m;
}

// The semisimple quotient A/J as bare structure constants.
template <class K>
struct QuotientAlgebra
{
    Quotient<K> q;
    std::vector<Mat<K>> left;
    Vec<K> unit;

    Vec<K> mult(const Vec<K>& x, const Vec<K>& y) const
    {
        Mat<K> l = Mat<K>::Zero(q.dim(), q.dim());
        for (Index i = 0; i < x.size(); ++i)
            if (!(x(i) == K(0)))
                l += x(i) * left[static_cast<std::size_t>(i)];
        return l * y;
    }
    Index dim() const { return q.dim(); }
};

template <class K>
QuotientAlgebra<K> quotient_algebra(const Algebra<K>& a, const Subspace<K>& j)
{
    QuotientAlgebra<K> s{Quotient<K>(j, a.field().one()), {}, {}};
    const Mat<K>& p = s.q.project();
    const Mat<K>& sec = s.q.section();
    for (Index i = 0; i < s.q.dim(); ++i)
        s.left.push_back(p * a.left_mult(sec.col(i)) * sec);
    s.unit = p * a.unit();
    return s;
}

template <class K>
Subspace<K> corner(const QuotientAlgebra<K>& s, const Vec<K>& e, const Vec<K>& f)
{
    const Index n = s.dim();
    Mat<K> g(n, n);
    for (Index i = 0; i < n; ++i) {
        Vec<K> b = Vec<K>::Zero(n);
        b(i) = K(1);
        g.col(i) = s.mult(s.mult(e, b), f);
    }
    return Subspace<K>::span(g, n);
}

template <class K>
Poly<K> min_poly(const QuotientAlgebra<K>& s, const Vec<K>& x, const Vec<K>& e, const Field<K>& field)
{
    std::vector<Vec<K>> powers{e};
    while (true) {
        Vec<K> next = s.mult(powers.back(), x);
        Mat<K> prev = columns(powers, s.dim());
        auto sol = solve<K>(prev, next);
        if (sol.particular) {
            Poly<K> p(powers.size() + 1, field.zero());
            for (std::size_t i = 0; i < powers.size(); ++i)
                p[i] = -(*sol.particular)(static_cast<Index>(i));
            p.back() = field.one();
            return p;
        }
        powers.push_back(std::move(next));
    }
}

template <class K>
Vec<K> eval_at(const QuotientAlgebra<K>& s, const Poly<K>& p, const Vec<K>& x, const Vec<K>& e)
{
    Vec<K> acc = Vec<K>::Zero(s.dim());
    Vec<K> pw = e;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] == K(0)))
            acc += p[i] * pw;
        pw = s.mult(pw, x);
    }
    return acc;
}

template <class K>
bool is_nontrivial_idempotent(const QuotientAlgebra<K>& s, const Vec<K>& f, const Vec<K>& e)
{
    return !is_zero<K>(f) && !is_zero<K>(Mat<K>(f - e)) && s.mult(f, f) == f;
}

// Idempotent f in eSe with f != 0, e, when one is found.
template <class K>
std::optional<Vec<K>> find_split(const QuotientAlgebra<K>& s, const Vec<K>& e, const Subspace<K>& ese,
                                 const Field<K>& field, std::mt19937_64& rng, std::uint64_t ceiling,
                                 bool& exhausted)
{
    exhausted = false;
    auto try_element = [&](const Vec<K>& x) -> std::optional<Vec<K>> {
        Poly<K> m = min_poly(s, x, e, field);
        for (const K& lambda : roots(m, field)) {
            Poly<K> lin{-lambda, field.one()};
            Poly<K> power{field.one()};
            Poly<K> g = m;
            while (true) {
                auto [q, r] = poly_divmod(g, lin, field.zero());
                if (!r.empty())
                    break;
                g = q;
                power = poly_mul(power, lin, field.zero());
            }
            if (g.size() < 2)
                continue;
            auto [gcd, u, v] = ext_gcd(power, g, field.zero(), field.one());
            if (gcd.size() != 1)
                continue;
            Poly<K> vg = poly_mul(v, g, field.zero());
            const K inv = field.one() / gcd[0];
            for (auto& c : vg)
                c *= inv;
            Vec<K> f = eval_at(s, vg, x, e);
            if (is_nontrivial_idempotent(s, f, e))
                return f;
        }
        return std::nullopt;
    };

    const Mat<K>& b = ese.basis();
    for (Index i = 0; i < b.cols(); ++i)
        if (auto f = try_element(b.col(i)))
            return f;
    for (int t = 0; t < 24; ++t) {
        Vec<K> c(b.cols());
        for (Index i = 0; i < b.cols(); ++i)
            c(i) = field.random(rng, 3);
        if (auto f = try_element(Vec<K>(b * c)))
            return f;
    }
    if (field.finite() && power_count(field.order(), static_cast<std::uint64_t>(b.cols())) <= ceiling) {
        std::optional<Vec<K>> found;
        enumerate_vectors(field, b.cols(), [&](const Vec<K>& c) {
            Vec<K> y = b * c;
            if (is_nontrivial_idempotent(s, y, e)) {
                found = y;
                return true;
            }
            return false;
        });
        exhausted = !found;
        return found;
    }
    return std::nullopt;
}

template <class K>
Mat<K> trace_gram(const std::vector<Mat<K>>& left, const Field<K>& field)
{
    const Index n = static_cast<Index>(left.size());
    Mat<K> g(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            K t = field.zero();
            const Mat<K> prod = left[i] * left[j];
            for (Index k = 0; k < n; ++k)
                t += prod(k, k);
            g(i, j) = t;
        }
    return g;
}

template <class K>
std::vector<Index> compute_generators(const Algebra<K>& a)
{
    std::vector<Index> gens;
    const Index n = a.dim();
    if (n == 0)
        return gens;
    auto closure = [&](const std::vector<Index>& g) {
        Mat<K> init(n, static_cast<Index>(g.size()) + 1);
        init.col(0) = a.unit();
        for (std::size_t i = 0; i < g.size(); ++i)
            init.col(static_cast<Index>(i) + 1) = a.basis_vector(g[i]);
        Subspace<K> v = Subspace<K>::span(init, n);
        while (true) {
            std::vector<Mat<K>> blocks{v.basis()};
            for (Index gi : g)
                blocks.push_back(a.right(gi) * v.basis());
            Subspace<K> w = Subspace<K>::span(hcat(blocks, n), n);
            if (w.dim() == v.dim())
                return v;
            v = std::move(w);
        }
    };
    Subspace<K> current = closure(gens);
    for (Index i = 0; i < n && current.dim() < n; ++i) {
        if (current.contains(Mat<K>(a.basis_vector(i))))
            continue;
        gens.push_back(i);
        current = closure(gens);
    }
    return gens;
}

template <class K>
Diagnostics check_idempotent_system(const Algebra<K>& a, const std::vector<Vec<K>>& idems,
                                    const Subspace<K>* modulo)
{
    Diagnostics d;
    auto zero_mod = [&](const Vec<K>& v) {
        return modulo ? modulo->contains(Mat<K>(v)) : is_zero<K>(Mat<K>(v));
    };
    Vec<K> sum = a.zero_vector();
    for (std::size_t i = 0; i < idems.size(); ++i) {
        sum += idems[i];
        if (!zero_mod(Vec<K>(a.mult(idems[i], idems[i]) - idems[i])))
            d.fail("e" + std::to_string(i) + " is not idempotent");
        for (std::size_t j = 0; j < idems.size(); ++j)
            if (i != j && !zero_mod(a.mult(idems[i], idems[j])))
                d.fail("e" + std::to_string(i) + " e" + std::to_string(j) + " != 0");
    }
    if (!zero_mod(Vec<K>(sum - a.unit())))
        d.fail("idempotents do not sum to the unit");
    return d;
}

} // namespace

template <class K>
Algebra<K>::Algebra(Field<K> field, std::vector<std::string> names, std::vector<Mat<K>> left, Vec<K> unit)
    : field_(std::move(field)), names_(std::move(names)), left_(std::move(left)), unit_(std::move(unit))
{
    const Index n = dim();
    if (static_cast<Index>(names_.size()) != n)
        throw InputError("algebra: " + std::to_string(names_.size()) + " basis names for dimension " +
                         std::to_string(n));
    if (unit_.size() != n)
        throw InputError("algebra: unit vector has length " + std::to_string(unit_.size()) +
                         ", expected " + std::to_string(n));
    for (auto& l : left_) {
        if (l.rows() != n || l.cols() != n)
            throw InputError("algebra: structure matrix of wrong shape");
        l = canonical(l, field_);
    }
    for (Index i = 0; i < n; ++i)
        unit_(i) = field_.normalize(unit_(i));
    right_.assign(static_cast<std::size_t>(n), Mat<K>::Zero(n, n));
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            right_[j].col(i) = left_[i].col(j);
}

template <class K>
Mat<K> Algebra<K>::left_mult(const Vec<K>& x) const
{
    Mat<K> out = Mat<K>::Constant(dim(), dim(), field_.zero());
    for (Index i = 0; i < dim(); ++i)
        if (!(x(i) == K(0)))
            out += x(i) * left_[i];
    return out;
}

template <class K>
Mat<K> Algebra<K>::right_mult(const Vec<K>& y) const
{
    Mat<K> out = Mat<K>::Constant(dim(), dim(), field_.zero());
    for (Index i = 0; i < dim(); ++i)
        if (!(y(i) == K(0)))
            out += y(i) * right_[i];
    return out;
}

template <class K>
Vec<K> Algebra<K>::mult(const Vec<K>& x, const Vec<K>& y) const
{
    return left_mult(x) * y;
}

template <class K>
Vec<K> Algebra<K>::basis_vector(Index i) const
{
    Vec<K> v = zero_vector();
    v(i) = field_.one();
    return v;
}

template <class K>
const RadicalInfo<K>& Algebra<K>::radical() const
{
    if (!radical_)
        throw HypothesisRefused(
            "no radical available: the trace criterion needs characteristic 0 or p > dim, and none was supplied");
    return *radical_;
}

template <class K>
const IdempotentInfo<K>& Algebra<K>::idempotents() const
{
    if (!idempotents_)
        throw HypothesisRefused("no primitive idempotents available (radical unknown)");
    return *idempotents_;
}

template <class K>
std::string Algebra<K>::describe(const Vec<K>& x) const
{
    std::string out;
    for (Index i = 0; i < x.size(); ++i) {
        if (x(i) == K(0))
            continue;
        const std::string c = x(i).str();
        const std::string& nm = names_[i];
        std::string term;
        if (nm == "1")
            term = c;
        else if (c == "1")
            term = nm;
        else if (c == "-1")
            term = "-" + nm;
        else
            term = c + "*" + nm;
        if (!out.empty() && term[0] != '-')
            out += "+";
        out += term;
    }
    return out.empty() ? "0" : out;
}

template <class K>
void Algebra<K>::equip(const EquipOptions<K>& options)
{
    generators_ = compute_generators(*this);
    if (options.bare || dim() == 0) {
        if (dim() == 0) {
            radical_ = RadicalInfo<K>{Subspace<K>(0), RadicalSource::trace_form, Maximality::trace_form, 1};
            idempotents_ = IdempotentInfo<K>{{}, {}, {}, {}, "certified (zero algebra)"};
        }
        return;
    }

    std::optional<Subspace<K>> supplied;
    if (options.radical) {
        if (options.radical->rows() != dim())
            throw InputError("supplied radical has vectors of the wrong length");
        supplied = Subspace<K>::span(canonical(*options.radical, field_), dim());
    }

    if (trace_criterion_applies(*this)) {
        Subspace<K> j = phl::radical(*this);
        if (supplied && !supplied->equals(j))
            throw InputError("supplied radical differs from the trace-form radical (dimension " +
                             std::to_string(supplied->dim()) + " vs " + std::to_string(j.dim()) + ")");
        radical_ = RadicalInfo<K>{j, RadicalSource::trace_form, Maximality::trace_form,
                                  is_nilpotent_ideal(*this, j).index};
    } else if (supplied) {
        RadicalCheck<K> rc = verify_radical(*this, *supplied);
        if (!rc.diag.ok())
            throw InputError("supplied radical rejected: " + rc.diag.first());
        radical_ = RadicalInfo<K>{*supplied, options.radical_source, rc.maximality, rc.nilpotency_index};
    } else {
        return;
    }

    const Subspace<K>& j = radical_->space;
    QuotientAlgebra<K> s = quotient_algebra(*this, j);
    const Mat<K>& proj = s.q.project();
    std::vector<Vec<K>> quotient_idems;
    std::vector<bool> certified;

    if (options.idempotents) {
        Diagnostics d = check_idempotent_system(*this, *options.idempotents, static_cast<const Subspace<K>*>(nullptr));
        if (!d.ok())
            throw InputError("supplied idempotents rejected: " + d.first());
        std::mt19937_64 rng(options.seed);
        for (const auto& e : *options.idempotents) {
            Vec<K> eb = proj * e;
            Subspace<K> ese = corner(s, eb, eb);
            bool exhausted = false;
            if (ese.dim() <= 1) {
                certified.push_back(true);
            } else if (find_split(s, eb, ese, field_, rng, options.ceiling, exhausted)) {
                throw InputError("supplied idempotent " + describe(e) + " is not primitive");
            } else {
                certified.push_back(exhausted);
            }
            quotient_idems.push_back(eb);
        }
        idempotents_ = IdempotentInfo<K>{};
        idempotents_->idems = *options.idempotents;
        for (auto& e : idempotents_->idems)
            for (Index i = 0; i < e.size(); ++i)
                e(i) = field_.normalize(e(i));
    } else {
        std::deque<Vec<K>> queue;
        if (options.initial_idempotents) {
            for (const auto& e : *options.initial_idempotents)
                if (!is_zero<K>(Mat<K>(proj * e)))
                    queue.push_back(proj * e);
        } else {
            queue.push_back(s.unit);
        }
        std::mt19937_64 rng(options.seed);
        while (!queue.empty()) {
            Vec<K> e = queue.front();
            queue.pop_front();
            Subspace<K> ese = corner(s, e, e);
            if (ese.dim() <= 1) {
                quotient_idems.push_back(e);
                certified.push_back(true);
                continue;
            }
            bool exhausted = false;
            if (auto f = find_split(s, e, ese, field_, rng, options.ceiling, exhausted)) {
                queue.push_front(Vec<K>(e - *f));
                queue.push_front(*f);
            } else {
                quotient_idems.push_back(e);
                certified.push_back(exhausted);
            }
        }
        std::vector<Vec<K>> reps;
        for (const auto& e : quotient_idems)
            reps.push_back(s.q.section() * e);
        idempotents_ = IdempotentInfo<K>{};
        idempotents_->idems = lift_idempotents(*this, j, reps);
    }

    auto& info = *idempotents_;
    const std::size_t m = quotient_idems.size();
    info.iso_class.assign(m, -1);
    int classes = 0;
    for (std::size_t i = 0; i < m; ++i) {
        info.end_dim.push_back(corner(s, quotient_idems[i], quotient_idems[i]).dim());
        for (std::size_t k = 0; k < i && info.iso_class[i] < 0; ++k)
            if (corner(s, quotient_idems[k], quotient_idems[i]).dim() > 0)
                info.iso_class[i] = info.iso_class[k];
        if (info.iso_class[i] < 0)
            info.iso_class[i] = classes++;
    }
    info.primitive_certified = certified;
    const bool all = std::all_of(certified.begin(), certified.end(), [](bool b) { return b; });
    info.primitivity = all ? "certified" : "asserted (no exhaustive search available)";

    if (radical_->maximality == Maximality::asserted && split_basic_certificate(*this, j, info.idems))
        radical_->maximality = Maximality::split_basic;
}

template <class K>
Diagnostics validate_algebra(const Field<K>& field, const std::vector<Mat<K>>& left, const Vec<K>& unit)
{
    Diagnostics d;
    const Index n = static_cast<Index>(left.size());
    if (unit.size() != n) {
        d.fail("unit vector has length " + std::to_string(unit.size()) + ", expected " + std::to_string(n));
        return d;
    }
    for (Index i = 0; i < n; ++i)
        if (left[i].rows() != n || left[i].cols() != n) {
            d.fail("structure matrix " + std::to_string(i) + " has the wrong shape");
            return d;
        }
    int reported = 0;
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            Mat<K> lhs = Mat<K>::Constant(n, n, field.zero());
            for (Index l = 0; l < n; ++l)
                if (!(left[i](l, j) == K(0)))
                    lhs += left[i](l, j) * left[l];
            Mat<K> rhs = left[i] * left[j];
            for (Index m = 0; m < n; ++m)
                for (Index k = 0; k < n; ++k)
                    if (!(lhs(k, m) == rhs(k, m)) && reported < 8) {
                        ++reported;
                        d.fail("associativity fails at (i,j,m,k) = (" + std::to_string(i) + "," +
                               std::to_string(j) + "," + std::to_string(m) + "," + std::to_string(k) + ")");
                    }
        }
    Mat<K> lu = Mat<K>::Constant(n, n, field.zero());
    for (Index i = 0; i < n; ++i)
        if (!(unit(i) == K(0)))
            lu += unit(i) * left[i];
    const Mat<K> id = canonical(Mat<K>(Mat<K>::Identity(n, n)), field);
    for (Index j = 0; j < n; ++j) {
        if (!(lu.col(j) == id.col(j)))
            d.fail("unit law fails: unit * b" + std::to_string(j) + " != b" + std::to_string(j));
        Vec<K> bu = Vec<K>::Constant(n, field.zero());
        for (Index i = 0; i < n; ++i)
            bu += left[j].col(i) * unit(i);
        if (!(bu == id.col(j)))
            d.fail("unit law fails: b" + std::to_string(j) + " * unit != b" + std::to_string(j));
    }
    return d;
}

template <class K>
AlgebraPtr<K> make_algebra(Field<K> field, std::vector<std::string> names, std::vector<Mat<K>> left, Vec<K> unit,
                           const EquipOptions<K>& options)
{
    for (auto& l : left)
        l = canonical(l, field);
    Vec<K> u = unit;
    for (Index i = 0; i < u.size(); ++i)
        u(i) = field.normalize(u(i));
    Diagnostics d = validate_algebra(field, left, u);
    if (!d.ok())
        throw InputError("invalid algebra: " + d.first());
    auto a = std::make_shared<Algebra<K>>(std::move(field), std::move(names), std::move(left), std::move(u));
    a->equip(options);
    return a;
}

template <class K>
AlgebraPtr<K> algebra_from_product(Field<K> field, std::vector<std::string> names, Vec<K> unit,
                                   const std::function<Vec<K>(const Vec<K>&, const Vec<K>&)>& product,
                                   const EquipOptions<K>& options)
{
    const Index n = unit.size();
    std::vector<Mat<K>> left;
    for (Index i = 0; i < n; ++i) {
        Vec<K> bi = Vec<K>::Constant(n, field.zero());
        bi(i) = field.one();
        Mat<K> l(n, n);
        for (Index j = 0; j < n; ++j) {
            Vec<K> bj = Vec<K>::Constant(n, field.zero());
            bj(j) = field.one();
            l.col(j) = product(bi, bj);
        }
        left.push_back(std::move(l));
    }
    return make_algebra(std::move(field), std::move(names), std::move(left), std::move(unit), options);
}

template <class K>
Diagnostics validate_morphism(const AlgebraMorphism<K>& f)
{
    Diagnostics d;
    const auto& s = *f.source;
    const auto& t = *f.target;
    if (f.mat.rows() != t.dim() || f.mat.cols() != s.dim()) {
        d.fail("morphism '" + f.name + "' has shape " + std::to_string(f.mat.rows()) + "x" +
               std::to_string(f.mat.cols()) + ", expected " + std::to_string(t.dim()) + "x" +
               std::to_string(s.dim()));
        return d;
    }
    if (!(Vec<K>(f.mat * s.unit()) == t.unit()))
        d.fail("morphism '" + f.name + "' does not preserve the unit");
    for (Index i = 0; i < s.dim(); ++i)
        for (Index j = 0; j < s.dim(); ++j) {
            Vec<K> lhs = f.mat * s.left(i).col(j);
            Vec<K> rhs = t.mult(f.mat.col(i), f.mat.col(j));
            if (!(lhs == rhs))
                d.fail("morphism '" + f.name + "' not multiplicative at (" + s.name(i) + ", " + s.name(j) + ")");
        }
    return d;
}

template <class K>
AlgebraMorphism<K> identity_morphism(const AlgebraPtr<K>& a, std::string name)
{
    return {a, a, canonical(Mat<K>(Mat<K>::Identity(a->dim(), a->dim())), a->field()), std::move(name)};
}

template <class K>
AlgebraMorphism<K> compose(const AlgebraMorphism<K>& g, const AlgebraMorphism<K>& f)
{
    if (f.target != g.source)
        throw InputError("compose: '" + g.name + "' does not start where '" + f.name + "' ends");
    return {f.source, g.target, g.mat * f.mat, g.name + "." + f.name};
}

template <class K>
bool is_surjective(const AlgebraMorphism<K>& f)
{
    return rank<K>(f.mat) == f.target->dim();
}

template <class K>
Diagnostics verify_ideal(const Algebra<K>& a, const Subspace<K>& j)
{
    Diagnostics d;
    if (j.ambient() != a.dim()) {
        d.fail("ideal lives in the wrong ambient space");
        return d;
    }
    for (Index i = 0; i < a.dim(); ++i) {
        if (!j.contains(Mat<K>(a.left(i) * j.basis())))
            d.fail("not closed under left multiplication by " + a.name(i));
        if (!j.contains(Mat<K>(a.right(i) * j.basis())))
            d.fail("not closed under right multiplication by " + a.name(i));
    }
    return d;
}

template <class K>
Ideal<K> kernel_ideal(const AlgebraMorphism<K>& f)
{
    Ideal<K> out{f.source, Subspace<K>::kernel(f.mat)};
    if (validate_morphism(f).ok()) {
        Diagnostics d = verify_ideal(*f.source, out.space);
        if (!d.ok())
            throw HardFailure("kernel of '" + f.name + "' is not an ideal: " + d.first());
    }
    return out;
}

template <class K>
Subspace<K> product_space(const Algebra<K>& a, const Subspace<K>& j, const Subspace<K>& l)
{
    const Index n = a.dim();
    std::vector<Mat<K>> blocks;
    for (Index p = 0; p < j.dim(); ++p)
        blocks.push_back(a.left_mult(j.basis().col(p)) * l.basis());
    if (blocks.empty())
        return Subspace<K>(n);
    return Subspace<K>::span(hcat(blocks, n), n);
}

template <class K>
Nilpotency is_nilpotent_ideal(const Algebra<K>& a, const Subspace<K>& j)
{
    Subspace<K> power = j;
    int n = 1;
    while (power.dim() > 0) {
        if (n > a.dim())
            return {false, 0};
        Subspace<K> next = product_space(a, power, j);
        if (next.dim() == power.dim())
            return {false, 0};
        power = std::move(next);
        ++n;
    }
    return {true, n};
}

template <class K>
Tristate is_universally_superfluous_sufficient(const Algebra<K>& a, const Subspace<K>& j)
{
    if (is_nilpotent_ideal(a, j).nilpotent)
        return Tristate::yes;
    if (a.has_radical() && a.radical().space.contains(j))
        return Tristate::yes;
    return Tristate::unknown;
}

template <class K>
bool trace_criterion_applies(const Algebra<K>& a)
{
    const auto c = a.field().characteristic();
    return c == 0 || c > static_cast<std::uint64_t>(a.dim());
}

template <class K>
Subspace<K> radical(const Algebra<K>& a)
{
    if (!trace_criterion_applies(a))
        throw HypothesisRefused("trace-form radical needs characteristic 0 or p > dim A (p = " +
                                std::to_string(a.field().characteristic()) + ", dim = " +
                                std::to_string(a.dim()) + ")");
    Subspace<K> j = Subspace<K>::kernel(trace_gram(a.left_all(), a.field()));
    RadicalCheck<K> rc = verify_radical(a, j);
    if (!rc.diag.ok())
        throw HardFailure("trace-form radical failed post-verification (invalid algebra data?): " + rc.diag.first());
    return j;
}

template <class K>
RadicalCheck<K> verify_radical(const Algebra<K>& a, const Subspace<K>& j)
{
    RadicalCheck<K> out;
    out.diag = verify_ideal(a, j);
    if (!out.diag.ok())
        return out;
    Nilpotency nil = is_nilpotent_ideal(a, j);
    if (!nil.nilpotent) {
        out.diag.fail(j.contains(Mat<K>(a.unit())) ? "ideal contains the unit, not nilpotent" : "ideal is not nilpotent");
        return out;
    }
    out.nilpotency_index = nil.index;
    if (trace_criterion_applies(a)) {
        QuotientAlgebra<K> s = quotient_algebra(a, j);
        if (rank<K>(trace_gram(s.left, a.field())) != s.dim()) {
            out.diag.fail("quotient is not semisimple: its trace form is degenerate");
            return out;
        }
        out.maximality = Maximality::trace_form;
    } else {
        out.maximality = Maximality::asserted;
        out.diag.note(to_string(Maximality::asserted));
    }
    return out;
}

template <class K>
std::vector<Vec<K>> lift_idempotents(const Algebra<K>& a, const Subspace<K>& j, const std::vector<Vec<K>>& idems)
{
    Diagnostics d = check_idempotent_system(a, idems, &j);
    if (!d.ok())
        throw InputError("idempotents are not a complete orthogonal system modulo the radical: " + d.first());
    Nilpotency nil = is_nilpotent_ideal(a, j);
    if (!nil.nilpotent)
        throw InputError("cannot lift idempotents modulo a non-nilpotent ideal");
    std::vector<Vec<K>> out;
    if (idems.empty())
        return out;
    Vec<K> f = a.unit();
    const K two = a.field().from_int(2), three = a.field().from_int(3);
    for (std::size_t i = 0; i + 1 < idems.size(); ++i) {
        Vec<K> e = a.mult(a.mult(f, idems[i]), f);
        int steps = 0;
        while (true) {
            Vec<K> e2 = a.mult(e, e);
            if (e2 == e)
                break;
            if (++steps > nil.index + 1)
                throw HardFailure("idempotent lifting did not converge within the nilpotency bound");
            Vec<K> e3 = a.mult(e2, e);
            e = three * e2 - two * e3;
        }
        out.push_back(e);
        f -= e;
    }
    if (!(a.mult(f, f) == f))
        throw HardFailure("complementary idempotent is not idempotent after lifting");
    out.push_back(f);
    Diagnostics post = check_idempotent_system(a, out, static_cast<const Subspace<K>*>(nullptr));
    if (!post.ok())
        throw HardFailure("lifted idempotents: " + post.first());
    for (std::size_t i = 0; i < out.size(); ++i)
        if (!j.contains(Mat<K>(out[i] - idems[i])))
            throw HardFailure("lifted idempotent differs from its input modulo the radical");
    return out;
}

template <class K>
bool split_basic_certificate(const Algebra<K>& a, const Subspace<K>& j, const std::vector<Vec<K>>& idems)
{
    if (!check_idempotent_system(a, idems, &j).ok())
        return false;
    QuotientAlgebra<K> s = quotient_algebra(a, j);
    for (std::size_t p = 0; p < idems.size(); ++p)
        for (std::size_t q = 0; q < idems.size(); ++q) {
            Index dim = corner(s, Vec<K>(s.q.project() * idems[p]), Vec<K>(s.q.project() * idems[q])).dim();
            if (dim != (p == q ? 1 : 0))
                return false;
        }
    return true;
}

template <class K>
AlgebraPtr<K> triangular(const AlgebraPtr<K>& b, const AlgebraPtr<K>& a, Index mdim, const std::vector<Mat<K>>& lact,
                         const std::vector<Mat<K>>& ract, const std::vector<std::string>& mnames)
{
    const Index nb = b->dim(), na = a->dim(), n = nb + mdim + na;
    if (static_cast<Index>(lact.size()) != nb || static_cast<Index>(ract.size()) != na)
        throw InputError("triangular: action families do not match the algebras");
    const Field<K>& field = b->field();
    auto lmul = [&](const Vec<K>& x) {
        Mat<K> l = Mat<K>::Constant(mdim, mdim, field.zero());
        for (Index i = 0; i < nb; ++i)
            if (!(x(i) == K(0)))
                l += x(i) * lact[i];
        return l;
    };
    auto rmul = [&](const Vec<K>& y) {
        Mat<K> r = Mat<K>::Constant(mdim, mdim, field.zero());
        for (Index i = 0; i < na; ++i)
            if (!(y(i) == K(0)))
                r += y(i) * ract[i];
        return r;
    };
    auto product = [&](const Vec<K>& x, const Vec<K>& y) {
        Vec<K> out(n);
        out.head(nb) = b->mult(x.head(nb), y.head(nb));
        out.segment(nb, mdim) = lmul(x.head(nb)) * y.segment(nb, mdim) + rmul(y.tail(na)) * x.segment(nb, mdim);
        out.tail(na) = a->mult(x.tail(na), y.tail(na));
        return out;
    };
    std::vector<std::string> names;
    for (const auto& s : b->names())
        names.push_back("11:" + s);
    for (const auto& s : mnames)
        names.push_back("12:" + s);
    for (const auto& s : a->names())
        names.push_back("22:" + s);
    Vec<K> unit(n);
    unit << b->unit(), Vec<K>::Constant(mdim, field.zero()), a->unit();

    EquipOptions<K> opts;
    Vec<K> eb = Vec<K>::Constant(n, field.zero()), ea = eb;
    eb.head(nb) = b->unit();
    ea.tail(na) = a->unit();
    opts.initial_idempotents = std::vector<Vec<K>>{};
    if (nb)
        opts.initial_idempotents->push_back(eb);
    if (na)
        opts.initial_idempotents->push_back(ea);
    if (b->has_radical() && a->has_radical()) {
        const auto& jb = b->radical().space;
        const auto& ja = a->radical().space;
        Mat<K> g = Mat<K>::Constant(n, jb.dim() + mdim + ja.dim(), field.zero());
        g.block(0, 0, nb, jb.dim()) = jb.basis();
        for (Index i = 0; i < mdim; ++i)
            g(nb + i, jb.dim() + i) = field.one();
        g.block(nb + mdim, jb.dim() + mdim, na, ja.dim()) = ja.basis();
        opts.radical = g;
        opts.radical_source = RadicalSource::construction;
    }
    return algebra_from_product<K>(field, std::move(names), std::move(unit), product, opts);
}

template <class K>
PullbackData<K> pullback(const AlgebraMorphism<K>& pi1, const AlgebraMorphism<K>& pi2)
{
    if (pi1.target != pi2.target)
        throw InputError("pullback: '" + pi1.name + "' and '" + pi2.name + "' have different targets");
    for (const auto* f : {&pi1, &pi2}) {
        Diagnostics d = validate_morphism(*f);
        if (!d.ok())
            throw InputError(d.first());
    }
    const auto& r1 = *pi1.source;
    const auto& r2 = *pi2.source;
    const Field<K>& field = r1.field();
    const Index n1 = r1.dim(), n2 = r2.dim();
    Mat<K> stacked(pi1.mat.rows(), n1 + n2);
    stacked << pi1.mat, -pi2.mat;
    Subspace<K> ker = Subspace<K>::kernel(stacked);
    const Mat<K>& basis = ker.basis();

    std::vector<std::string> names;
    for (Index k = 0; k < ker.dim(); ++k)
        names.push_back("(" + r1.describe(basis.col(k).head(n1)) + "," + r2.describe(basis.col(k).tail(n2)) + ")");
    auto product = [&](const Vec<K>& x, const Vec<K>& y) {
        Vec<K> u = basis * x, v = basis * y;
        Vec<K> w(n1 + n2);
        w << r1.mult(u.head(n1), v.head(n1)), r2.mult(u.tail(n2), v.tail(n2));
        if (!ker.contains(Mat<K>(w)))
            throw HardFailure("pullback is not closed under multiplication");
        return Vec<K>(ker.coords(Mat<K>(w)));
    };
    Vec<K> one(n1 + n2);
    one << r1.unit(), r2.unit();
    if (!ker.contains(Mat<K>(one)))
        throw HardFailure("pullback does not contain the unit");
    Vec<K> unit = ker.coords(Mat<K>(one));

    EquipOptions<K> opts;
    // R meets rad R1 x rad R2 in rad R when one map is onto and the other
    // sends its radical into rad R'; otherwise the radical is computed.
    auto maps_radical = [&](const AlgebraMorphism<K>& pi) {
        const Algebra<K>& rp = *pi.target;
        return pi.source->has_radical() && rp.has_radical() &&
               rp.radical().space.contains(pi.source->radical().space.image(pi.mat));
    };
    const bool construction = (is_surjective(pi1) && maps_radical(pi2)) || (is_surjective(pi2) && maps_radical(pi1));
    if (construction && r1.has_radical() && r2.has_radical()) {
        Mat<K> g = Mat<K>::Constant(n1 + n2, r1.radical().space.dim() + r2.radical().space.dim(), field.zero());
        g.topLeftCorner(n1, r1.radical().space.dim()) = r1.radical().space.basis();
        g.bottomRightCorner(n2, r2.radical().space.dim()) = r2.radical().space.basis();
        Subspace<K> prod_rad = Subspace<K>::span(g, n1 + n2).intersect(ker);
        opts.radical = Mat<K>(ker.coords(prod_rad.basis()));
        opts.radical_source = RadicalSource::construction;
    }
    AlgebraPtr<K> r = algebra_from_product<K>(field, std::move(names), std::move(unit), product, opts);
    PullbackData<K> d;
    d.pi1 = pi1;
    d.pi2 = pi2;
    d.i1 = {r, pi1.source, Mat<K>(basis.topRows(n1)), "i1"};
    d.i2 = {r, pi2.source, Mat<K>(basis.bottomRows(n2)), "i2"};
    return d;
}

template <class K>
Diagnostics verify_pullback(const PullbackData<K>& d)
{
    Diagnostics out;
    out.absorb(validate_morphism(d.i1));
    out.absorb(validate_morphism(d.i2));
    if (!(Mat<K>(d.pi1.mat * d.i1.mat) == Mat<K>(d.pi2.mat * d.i2.mat)))
        out.fail("pi1 i1 != pi2 i2");
    Mat<K> stacked(d.pi1.mat.rows(), d.R1()->dim() + d.R2()->dim());
    stacked << d.pi1.mat, -d.pi2.mat;
    const Index expected = d.R1()->dim() + d.R2()->dim() - rank<K>(stacked);
    if (d.R()->dim() != expected)
        out.fail("dim R = " + std::to_string(d.R()->dim()) + ", expected " + std::to_string(expected));
    Mat<K> emb(d.R1()->dim() + d.R2()->dim(), d.R()->dim());
    emb << d.i1.mat, d.i2.mat;
    if (rank<K>(emb) != d.R()->dim())
        out.fail("i1 (+) i2 is not injective");
    if (!Subspace<K>::span(emb, emb.rows()).equals(Subspace<K>::kernel(stacked)))
        out.fail("image of R differs from the fibre product");
    return out;
}

template <class K>
AlgebraPtr<K> opposite(const AlgebraPtr<K>& a)
{
    std::vector<Mat<K>> left;
    for (Index i = 0; i < a->dim(); ++i)
        left.push_back(a->right(i));
    EquipOptions<K> opts;
    if (a->has_radical()) {
        opts.radical = a->radical().space.basis();
        opts.radical_source = a->radical().source;
        if (a->has_idempotents())
            opts.idempotents = a->idempotents().idems;
    } else {
        opts.bare = true;
    }
    return make_algebra<K>(a->field(), a->names(), std::move(left), a->unit(), opts);
}

template <class K>
AlgebraPtr<K> gamma_prime(const PullbackData<K>& d)
{
    if (!is_surjective(d.pi1))
        throw HypothesisRefused("Gamma' needs pi1 surjective");
    const auto& r = *d.R();
    const auto& r1 = *d.R1();
    const Field<K>& field = r.field();
    Subspace<K> i1sp = Subspace<K>::kernel(d.pi1.mat);
    Subspace<K> ki2 = Subspace<K>::kernel(d.i2.mat);
    const Index nr = r.dim(), n1 = r1.dim(), ni = i1sp.dim();
    if (ki2.dim() != ni)
        throw HardFailure("Ker i2 and I1 have different dimensions");
    // theta: I1 coordinates -> R coordinates, inverse of i1 restricted to Ker i2.
    Mat<K> restricted = i1sp.coords(Mat<K>(d.i1.mat * ki2.basis()));
    auto inv = inverse<K>(restricted);
    if (!inv)
        throw HardFailure("i1 does not map Ker i2 isomorphically onto I1");
    const Mat<K> theta = ki2.basis() * *inv;
    const Mat<K>& emb = i1sp.basis();

    const Index o12 = nr, o21 = nr + n1, o22 = nr + n1 + ni, n = o22 + n1;
    auto product = [&](const Vec<K>& x, const Vec<K>& y) {
        const Vec<K> r0 = x.head(nr), a = x.segment(o12, n1), u = emb * x.segment(o21, ni), b = x.tail(n1);
        const Vec<K> r0p = y.head(nr), ap = y.segment(o12, n1), up = emb * y.segment(o21, ni), bp = y.tail(n1);
        Vec<K> out(n);
        out.head(nr) = r.mult(r0, r0p) + theta * i1sp.coords(Mat<K>(r1.mult(a, up)));
        out.segment(o12, n1) = r1.mult(d.i1.mat * r0, ap) + r1.mult(a, bp);
        Vec<K> c21 = r1.mult(u, d.i1.mat * r0p) + r1.mult(b, up);
        out.segment(o21, ni) = i1sp.coords(Mat<K>(c21));
        out.tail(n1) = r1.mult(u, ap) + r1.mult(b, bp);
        return out;
    };
    std::vector<std::string> names;
    for (const auto& s : r.names())
        names.push_back("11:" + s);
    for (const auto& s : r1.names())
        names.push_back("12:" + s);
    for (Index k = 0; k < ni; ++k)
        names.push_back("21:" + r1.describe(emb.col(k)));
    for (const auto& s : r1.names())
        names.push_back("22:" + s);
    Vec<K> unit = Vec<K>::Constant(n, field.zero());
    unit.head(nr) = r.unit();
    unit.tail(n1) = r1.unit();
    EquipOptions<K> opts;
    opts.bare = true;
    return algebra_from_product<K>(field, std::move(names), std::move(unit), product, opts);
}

template <class K>
AlgebraPtr<K> truncated_polynomial(const Field<K>& field, int n, const std::string& var)
{
    if (n < 1)
        throw InputError("truncated polynomial algebra needs n >= 1");
    std::vector<std::string> names{"1"};
    for (int i = 1; i < n; ++i)
        names.push_back(i == 1 ? var : var + "^" + std::to_string(i));
    std::vector<Mat<K>> left;
    for (int i = 0; i < n; ++i) {
        Mat<K> l = zeros(field, n, n);
        for (int j = 0; i + j < n; ++j)
            l(i + j, j) = field.one();
        left.push_back(std::move(l));
    }
    Vec<K> unit = zeros(field, n, 1);
    unit(0) = field.one();
    EquipOptions<K> opts;
    Mat<K> rad = zeros(field, n, n - 1);
    for (int i = 1; i < n; ++i)
        rad(i, i - 1) = field.one();
    opts.radical = rad;
    opts.radical_source = RadicalSource::construction;
    return make_algebra(field, std::move(names), std::move(left), std::move(unit), opts);
}

template <class K>
AlgebraPtr<K> diagonal_algebra(const Field<K>& field, int n)
{
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i)
        names.push_back(n == 1 ? "1" : "e" + std::to_string(i + 1));
    std::vector<Mat<K>> left;
    for (int i = 0; i < n; ++i) {
        Mat<K> l = zeros(field, n, n);
        l(i, i) = field.one();
        left.push_back(std::move(l));
    }
    Vec<K> unit = Vec<K>::Constant(n, field.one());
    EquipOptions<K> opts;
    opts.radical = zeros(field, n, 0);
    opts.radical_source = RadicalSource::construction;
    return make_algebra(field, std::move(names), std::move(left), std::move(unit), opts);
}

template <class K>
AlgebraPtr<K> matrix_algebra(const Field<K>& field, int n, const EquipOptions<K>& options)
{
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            names.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
    const int d = n * n;
    std::vector<Mat<K>> left;
    for (int a = 0; a < d; ++a) {
        Mat<K> l = zeros(field, d, d);
        const int i = a / n, j = a % n;
        for (int b = 0; b < d; ++b)
            if (b / n == j)
                l(i * n + b % n, b) = field.one();
        left.push_back(std::move(l));
    }
    Vec<K> unit = zeros(field, d, 1);
    for (int i = 0; i < n; ++i)
        unit(i * n + i) = field.one();
    return make_algebra(field, std::move(names), std::move(left), std::move(unit), options);
}

#define PHL_INSTANTIATE_ALGEBRA(K)                                                                             \
    template class Algebra<K>;                                                                                 \
    template Diagnostics validate_algebra<K>(const Field<K>&, const std::vector<Mat<K>>&, const Vec<K>&);      \
    template AlgebraPtr<K> make_algebra<K>(Field<K>, std::vector<std::string>, std::vector<Mat<K>>, Vec<K>,    \
                                           const EquipOptions<K>&);                                            \
    template AlgebraPtr<K> algebra_from_product<K>(                                                            \
        Field<K>, std::vector<std::string>, Vec<K>,                                                            \
        const std::function<Vec<K>(const Vec<K>&, const Vec<K>&)>&, const EquipOptions<K>&);                   \
    template Diagnostics validate_morphism<K>(const AlgebraMorphism<K>&);                                      \
    template AlgebraMorphism<K> identity_morphism<K>(const AlgebraPtr<K>&, std::string);                       \
    template AlgebraMorphism<K> compose<K>(const AlgebraMorphism<K>&, const AlgebraMorphism<K>&);              \
    template bool is_surjective<K>(const AlgebraMorphism<K>&);                                                 \
    template Diagnostics verify_ideal<K>(const Algebra<K>&, const Subspace<K>&);                               \
    template Ideal<K> kernel_ideal<K>(const AlgebraMorphism<K>&);                                              \
    template Subspace<K> product_space<K>(const Algebra<K>&, const Subspace<K>&, const Subspace<K>&);          \
    template Nilpotency is_nilpotent_ideal<K>(const Algebra<K>&, const Subspace<K>&);                          \
    template Tristate is_universally_superfluous_sufficient<K>(const Algebra<K>&, const Subspace<K>&);         \
    template bool trace_criterion_applies<K>(const Algebra<K>&);                                               \
    template Subspace<K> radical<K>(const Algebra<K>&);                                                        \
    template RadicalCheck<K> verify_radical<K>(const Algebra<K>&, const Subspace<K>&);                         \
    template std::vector<Vec<K>> lift_idempotents<K>(const Algebra<K>&, const Subspace<K>&,                    \
                                                     const std::vector<Vec<K>>&);                              \
    template bool split_basic_certificate<K>(const Algebra<K>&, const Subspace<K>&, const std::vector<Vec<K>>&); \
    template AlgebraPtr<K> triangular<K>(const AlgebraPtr<K>&, const AlgebraPtr<K>&, Index,                    \
                                         const std::vector<Mat<K>>&, const std::vector<Mat<K>>&,               \
                                         const std::vector<std::string>&);                                     \
    template PullbackData<K> pullback<K>(const AlgebraMorphism<K>&, const AlgebraMorphism<K>&);                \
    template Diagnostics verify_pullback<K>(const PullbackData<K>&);                                           \
    template AlgebraPtr<K> opposite<K>(const AlgebraPtr<K>&);                                                  \
    template AlgebraPtr<K> gamma_prime<K>(const PullbackData<K>&);                                             \
    template AlgebraPtr<K> truncated_polynomial<K>(const Field<K>&, int, const std::string&);                  \
    template AlgebraPtr<K> diagonal_algebra<K>(const Field<K>&, int);                                          \
    template AlgebraPtr<K> matrix_algebra<K>(const Field<K>&, int, const EquipOptions<K>&);

PHL_INSTANTIATE_ALGEBRA(Rational)
PHL_INSTANTIATE_ALGEBRA(Fp)

} // namespace phl
