#include "phl/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

namespace phl {

const std::map<std::string, std::vector<std::string>>& check_parameters()
{
    static const std::map<std::string, std::vector<std::string>> table{
        {"validate", {}},
        {"pullback", {}},
        {"milnor", {"dim_bound", "samples", "seed", "ceiling"}},
        {"lemmas", {"samples", "seed", "max_dim"}},
        {"separated", {"samples", "seed", "max_dim"}},
        {"gamma", {"samples", "seed", "max_dim"}},
        {"tilting", {}},
        {"derived", {"samples", "seed", "max_support", "max_dim"}},
        {"counterexample", {"twist"}},
    };
    return table;
}

namespace {

struct Line
{
    std::vector<Token> toks;
    int number = 0;
};

std::vector<Line> tokenize(const std::string& text)
{
    std::vector<Line> out;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        Line line{{}, number};
        std::size_t i = 0;
        while (i < raw.size()) {
            if (std::isspace(static_cast<unsigned char>(raw[i]))) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j])))
                ++j;
            line.toks.push_back({raw.substr(i, j - i), {number, static_cast<int>(i) + 1}});
            i = j;
        }
        if (!line.toks.empty())
            out.push_back(std::move(line));
    }
    return out;
}

long long to_int(const Token& t, const std::string& what)
{
    long long v = 0;
    const char* b = t.text.data();
    const char* e = b + t.text.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e)
        throw ScenarioError(t.pos, what + " must be an integer, got '" + t.text + "'");
    return v;
}

Index to_index(const Token& t, const std::string& what)
{
    long long v = to_int(t, what);
    if (v < 0)
        throw ScenarioError(t.pos, what + " must be non-negative");
    return static_cast<Index>(v);
}

bool is_integer_literal(const std::string& s)
{
    std::size_t i = s.size() > 1 && s[0] == '-' ? 1 : 0;
    if (i == s.size())
        return false;
    return std::all_of(s.begin() + static_cast<long>(i), s.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool is_literal(const std::string& s, const FieldSpec& f)
{
    auto slash = s.find('/');
    if (slash == std::string::npos)
        return is_integer_literal(s);
    if (f.kind == FieldKind::prime)
        return false;
    std::string den = s.substr(slash + 1);
    return is_integer_literal(s.substr(0, slash)) && is_integer_literal(den) && den[0] != '-' &&
           den.find_first_not_of('0') != std::string::npos;
}

class Parser
{
public:
    Parser(const std::string& text, const std::string& source) : lines_(tokenize(text)) { sc_.source = source; }

    Scenario run()
    {
        while (at_ < lines_.size())
            top_level();
        resolve();
        return std::move(sc_);
    }

private:
    std::vector<Line> lines_;
    std::size_t at_ = 0;
    Scenario sc_;

    const Line& next() { return lines_[at_++]; }

    [[noreturn]] static void fail(const Token& t, const std::string& what) { throw ScenarioError(t.pos, what); }

    static void arity(const Line& l, std::size_t n, const std::string& form)
    {
        if (l.toks.size() != n)
            fail(l.toks.size() > n ? l.toks[n] : l.toks.back(), "expected '" + form + "'");
    }

    /// True when the header opens a block; false for an inline `{}`.
    static bool opens(const Line& l, std::size_t n, const std::string& form)
    {
        if (l.toks.size() == n && l.toks.back().text == "{}")
            return false;
        if (l.toks.size() == n && l.toks.back().text == "{")
            return true;
        if (l.toks.size() == n + 1 && l.toks[n - 1].text == "{" && l.toks[n].text == "}")
            return false;
        fail(l.toks.size() >= n ? l.toks[n - 1] : l.toks.back(), "expected '" + form + "'");
    }

    bool closing()
    {
        if (at_ < lines_.size() && lines_[at_].toks.front().text == "}") {
            const Line& l = next();
            if (l.toks.size() != 1)
                fail(l.toks[1], "unexpected text after '}'");
            return true;
        }
        return false;
    }

    void expect_more(const Token& opener)
    {
        if (at_ >= lines_.size())
            fail(opener, "block opened here is never closed");
    }

    TokenMatrix matrix_block(const Line& header, std::size_t n, const std::string& form)
    {
        TokenMatrix rows;
        if (!opens(header, n, form))
            return rows;
        for (;;) {
            expect_more(header.toks.front());
            if (closing())
                return rows;
            const Line& l = next();
            if (!rows.empty() && l.toks.size() != rows.front().size())
                fail(l.toks.front(), "row has " + std::to_string(l.toks.size()) + " entries, expected " +
                                         std::to_string(rows.front().size()));
            rows.push_back(l.toks);
        }
    }

    void top_level()
    {
        const Line& l = next();
        const std::string& key = l.toks.front().text;
        if (key == "scenario") {
            arity(l, 2, "scenario NAME");
            if (sc_.title)
                fail(l.toks[0], "duplicate 'scenario'");
            sc_.title = l.toks[1].text;
        } else if (key == "field") {
            arity(l, 2, "field Q | field F<p>");
            if (sc_.field)
                fail(l.toks[0], "duplicate 'field'");
            sc_.field = parse_field(l.toks[1]);
            sc_.field_pos = l.toks[0].pos;
        } else if (key == "algebra") {
            algebra(l);
        } else if (key == "morphism") {
            morphism(l);
        } else if (key == "module") {
            module(l);
        } else if (key == "complex") {
            complex(l);
        } else if (key == "diagram") {
            arity(l, 3, "diagram PI1 PI2");
            if (sc_.diagram)
                fail(l.toks[0], "duplicate 'diagram'");
            sc_.diagram = std::make_pair(l.toks[1], l.toks[2]);
        } else if (key == "checks") {
            checks(l);
        } else if (key == "}") {
            fail(l.toks[0], "unmatched '}'");
        } else {
            fail(l.toks[0], "unknown key '" + key + "'");
        }
    }

    static FieldSpec parse_field(const Token& t)
    {
        if (t.text == "Q")
            return {FieldKind::rationals, 0};
        if (t.text.size() > 1 && t.text[0] == 'F') {
            Token num{t.text.substr(1), {t.pos.line, t.pos.col + 1}};
            long long p = to_int(num, "field characteristic");
            if (p < 2 || p > 46337 || !is_prime(static_cast<std::uint64_t>(p)))
                fail(t, "F<p> needs a prime p below 46337, got " + num.text);
            return {FieldKind::prime, static_cast<std::uint32_t>(p)};
        }
        fail(t, "unknown field '" + t.text + "' (expected Q or F<p>)");
    }

    void algebra(const Line& header)
    {
        AlgebraSpec a;
        if (header.toks.size() < 2)
            fail(header.toks[0], "expected 'algebra NAME {'");
        a.name = header.toks[1];
        if (!opens(header, 3, "algebra NAME {"))
            fail(header.toks[2], "an algebra block cannot be empty");
        std::set<std::string> seen;
        for (;;) {
            expect_more(header.toks[0]);
            if (closing())
                break;
            const Line& l = next();
            const std::string& key = l.toks[0].text;
            if (key != "sc" && !seen.insert(key).second)
                fail(l.toks[0], "duplicate '" + key + "' in algebra " + a.name.text);
            if (key == "basis") {
                if (l.toks.size() < 2)
                    fail(l.toks[0], "basis needs at least one name");
                a.basis.assign(l.toks.begin() + 1, l.toks.end());
                std::set<std::string> names;
                for (const auto& b : a.basis)
                    if (!names.insert(b.text).second)
                        fail(b, "duplicate basis name '" + b.text + "'");
            } else if (key == "unit") {
                a.unit.assign(l.toks.begin() + 1, l.toks.end());
            } else if (key == "sc") {
                arity(l, 5, "sc I J K VALUE");
                a.constants.push_back({to_index(l.toks[1], "sc index"), to_index(l.toks[2], "sc index"),
                                       to_index(l.toks[3], "sc index"), l.toks[4]});
            } else if (key == "radical") {
                a.radical = matrix_block(l, 2, "radical {");
            } else if (key == "idempotents") {
                a.idempotents = matrix_block(l, 2, "idempotents {");
            } else {
                fail(l.toks[0], "unknown key '" + key + "' in algebra " + a.name.text);
            }
        }
        if (a.basis.empty())
            fail(header.toks[0], "algebra " + a.name.text + " has no basis");
        if (a.unit.empty())
            fail(header.toks[0], "algebra " + a.name.text + " has no unit");
        sc_.algebras.push_back(std::move(a));
    }

    void morphism(const Line& header)
    {
        if (header.toks.size() < 5 || header.toks[3].text != "->")
            fail(header.toks.size() > 3 ? header.toks[3] : header.toks.back(), "expected 'morphism NAME SRC -> TGT {'");
        MorphismSpec m{header.toks[1], header.toks[2], header.toks[4], {}};
        m.rows = matrix_block(header, 6, "morphism NAME SRC -> TGT {");
        sc_.morphisms.push_back(std::move(m));
    }

    void module(const Line& header)
    {
        if (header.toks.size() < 4 || header.toks[2].text != "over")
            fail(header.toks.size() > 2 ? header.toks[2] : header.toks.back(), "expected 'module NAME over ALG {'");
        ModuleSpec m;
        m.name = header.toks[1];
        m.algebra = header.toks[3];
        bool has_dim = false;
        if (opens(header, 5, "module NAME over ALG {"))
            for (;;) {
                expect_more(header.toks[0]);
                if (closing())
                    break;
                const Line& l = next();
                const std::string& key = l.toks[0].text;
                if (key == "dim") {
                    arity(l, 2, "dim N");
                    if (has_dim)
                        fail(l.toks[0], "duplicate 'dim'");
                    m.dim = to_index(l.toks[1], "dim");
                    has_dim = true;
                } else if (key == "act") {
                    if (l.toks.size() < 3)
                        fail(l.toks[0], "expected 'act I {'");
                    Index i = to_index(l.toks[1], "act index");
                    if (m.act.count(i))
                        fail(l.toks[1], "duplicate action matrix for basis index " + l.toks[1].text);
                    m.act_pos[i] = l.toks[0].pos;
                    m.act[i] = matrix_block(l, 3, "act I {");
                } else {
                    fail(l.toks[0], "unknown key '" + key + "' in module " + m.name.text);
                }
            }
        if (!has_dim)
            fail(header.toks[0], "module " + m.name.text + " has no dim");
        sc_.modules.push_back(std::move(m));
    }

    void complex(const Line& header)
    {
        if (header.toks.size() < 4 || header.toks[2].text != "over")
            fail(header.toks.size() > 2 ? header.toks[2] : header.toks.back(), "expected 'complex NAME over ALG {'");
        ComplexSpec c;
        c.name = header.toks[1];
        c.algebra = header.toks[3];
        if (opens(header, 5, "complex NAME over ALG {"))
            for (;;) {
                expect_more(header.toks[0]);
                if (closing())
                    break;
                const Line& l = next();
                const std::string& key = l.toks[0].text;
                if (key == "lo") {
                    arity(l, 2, "lo N");
                    c.lo = static_cast<int>(to_int(l.toks[1], "lo"));
                } else if (key == "terms") {
                    c.terms.assign(l.toks.begin() + 1, l.toks.end());
                } else if (key == "d") {
                    if (l.toks.size() < 3)
                        fail(l.toks[0], "expected 'd N {'");
                    int n = static_cast<int>(to_int(l.toks[1], "differential degree"));
                    if (c.diffs.count(n))
                        fail(l.toks[1], "duplicate differential d^" + l.toks[1].text);
                    c.diff_pos[n] = l.toks[0].pos;
                    c.diffs[n] = matrix_block(l, 3, "d N {");
                } else {
                    fail(l.toks[0], "unknown key '" + key + "' in complex " + c.name.text);
                }
            }
        sc_.complexes.push_back(std::move(c));
    }

    void checks(const Line& header)
    {
        if (!opens(header, 2, "checks {"))
            return;
        for (;;) {
            expect_more(header.toks[0]);
            if (closing())
                return;
            const Line& l = next();
            CheckSpec c;
            c.name = l.toks[0];
            auto known = check_parameters().find(c.name.text);
            if (known == check_parameters().end())
                fail(c.name, "unknown check '" + c.name.text + "'");
            for (std::size_t k = 1; k < l.toks.size(); ++k) {
                const Token& t = l.toks[k];
                auto eq = t.text.find('=');
                if (eq == std::string::npos || eq == 0 || eq + 1 == t.text.size())
                    fail(t, "expected KEY=VALUE, got '" + t.text + "'");
                std::string key = t.text.substr(0, eq);
                Token value{t.text.substr(eq + 1), {t.pos.line, t.pos.col + static_cast<int>(eq) + 1}};
                const auto& keys = known->second;
                if (key != "expect" && std::find(keys.begin(), keys.end(), key) == keys.end())
                    fail(t, "unknown parameter '" + key + "' for check " + c.name.text);
                if (key == "expect" && value.text != "pass" && value.text != "refused")
                    fail(value, "expect must be 'pass' or 'refused'");
                if (key != "expect" && key != "twist")
                    to_index(value, key);
                if (!c.params.emplace(key, value).second)
                    fail(t, "duplicate parameter '" + key + "'");
            }
            sc_.checks.push_back(std::move(c));
        }
    }

    void literal(const Token& t) const
    {
        if (!is_literal(t.text, *sc_.field))
            fail(t, "'" + t.text + "' is not a literal of " + sc_.field->str());
    }

    void literals(const TokenMatrix& m) const
    {
        for (const auto& r : m)
            for (const auto& t : r)
                literal(t);
    }

    void resolve()
    {
        std::map<std::string, const AlgebraSpec*> algs;
        std::map<std::string, const MorphismSpec*> mors;
        std::map<std::string, const ModuleSpec*> mods;
        std::set<std::string> names;
        auto declare = [&](const Token& t) {
            if (!names.insert(t.text).second)
                fail(t, "name '" + t.text + "' is already defined");
        };
        bool needs_field = !sc_.algebras.empty() || !sc_.checks.empty();
        if (needs_field && !sc_.field)
            fail(sc_.algebras.empty() ? sc_.checks.front().name : sc_.algebras.front().name,
                 "scenario has no 'field' line");

        for (const auto& a : sc_.algebras) {
            declare(a.name);
            algs[a.name.text] = &a;
            const Index n = static_cast<Index>(a.basis.size());
            if (static_cast<Index>(a.unit.size()) != n)
                fail(a.name, "unit of " + a.name.text + " has " + std::to_string(a.unit.size()) +
                                 " entries, basis has " + std::to_string(n));
            for (const auto& t : a.unit)
                literal(t);
            for (const auto& c : a.constants) {
                if (c.i >= n || c.j >= n || c.k >= n)
                    fail(c.value, "structure constant index out of range for " + a.name.text);
                literal(c.value);
            }
            for (const auto* block : {&a.radical, &a.idempotents})
                if (*block) {
                    for (const auto& r : **block)
                        if (static_cast<Index>(r.size()) != n)
                            fail(r.front(), "vector has " + std::to_string(r.size()) + " entries, " + a.name.text +
                                                " has dimension " + std::to_string(n));
                    literals(**block);
                }
        }
        for (const auto& m : sc_.morphisms) {
            declare(m.name);
            mors[m.name.text] = &m;
            for (const auto* end : {&m.source, &m.target})
                if (!algs.count(end->text))
                    fail(*end, "unknown algebra '" + end->text + "'");
            const Index rows = static_cast<Index>(algs[m.target.text]->basis.size());
            const Index cols = static_cast<Index>(algs[m.source.text]->basis.size());
            if (static_cast<Index>(m.rows.size()) != rows || (!m.rows.empty() && static_cast<Index>(m.rows[0].size()) != cols))
                fail(m.name, "morphism " + m.name.text + " must be a " + std::to_string(rows) + " x " +
                                 std::to_string(cols) + " matrix");
            literals(m.rows);
        }
        for (const auto& m : sc_.modules) {
            declare(m.name);
            mods[m.name.text] = &m;
            auto a = algs.find(m.algebra.text);
            if (a == algs.end())
                fail(m.algebra, "unknown algebra '" + m.algebra.text + "'");
            const Index n = static_cast<Index>(a->second->basis.size());
            for (const auto& [i, mat] : m.act) {
                const Token at{"act", m.act_pos.at(i)};
                if (i >= n)
                    fail(at, "action index " + std::to_string(i) + " out of range for " + m.algebra.text);
                if (static_cast<Index>(mat.size()) != m.dim ||
                    (!mat.empty() && static_cast<Index>(mat[0].size()) != m.dim))
                    fail(at, "action matrix must be " + std::to_string(m.dim) + " x " + std::to_string(m.dim));
                literals(mat);
            }
            if (static_cast<Index>(m.act.size()) != n && m.dim > 0)
                fail(m.name, "module " + m.name.text + " needs an action matrix for each of the " +
                                 std::to_string(n) + " basis vectors");
        }
        for (const auto& c : sc_.complexes) {
            declare(c.name);
            if (!algs.count(c.algebra.text))
                fail(c.algebra, "unknown algebra '" + c.algebra.text + "'");
            std::vector<Index> dims;
            for (const auto& t : c.terms) {
                auto m = mods.find(t.text);
                if (m == mods.end())
                    fail(t, "unknown module '" + t.text + "'");
                if (m->second->algebra.text != c.algebra.text)
                    fail(t, "module " + t.text + " is over " + m->second->algebra.text + ", not " + c.algebra.text);
                dims.push_back(m->second->dim);
            }
            const int hi = c.lo + static_cast<int>(c.terms.size()) - 1;
            for (int n = c.lo; n < hi; ++n)
                if (!c.diffs.count(n))
                    fail(c.name, "complex " + c.name.text + " is missing d " + std::to_string(n));
            for (const auto& [n, mat] : c.diffs) {
                const Token at{"d", c.diff_pos.at(n)};
                if (n < c.lo || n >= hi)
                    fail(at, "d " + std::to_string(n) + " lies outside the support of " + c.name.text);
                const Index rows = dims[static_cast<std::size_t>(n + 1 - c.lo)];
                const Index cols = dims[static_cast<std::size_t>(n - c.lo)];
                if (static_cast<Index>(mat.size()) != rows || (!mat.empty() && static_cast<Index>(mat[0].size()) != cols))
                    fail(at, "d " + std::to_string(n) + " must be a " + std::to_string(rows) + " x " +
                                 std::to_string(cols) + " matrix");
                literals(mat);
            }
        }
        if (sc_.diagram) {
            const auto& [p1, p2] = *sc_.diagram;
            for (const auto* p : {&p1, &p2})
                if (!mors.count(p->text))
                    fail(*p, "unknown morphism '" + p->text + "'");
            if (mors[p1.text]->target.text != mors[p2.text]->target.text)
                fail(p2, "pi1 and pi2 must share their target algebra");
        }
        for (const auto& c : sc_.checks) {
            if (c.name.text != "validate" && !sc_.diagram)
                fail(c.name, "check '" + c.name.text + "' needs a 'diagram' line");
            if (auto t = c.params.find("twist"); t != c.params.end()) {
                std::string s = t->second.text;
                int col = t->second.pos.col;
                std::size_t start = 0;
                for (;;) {
                    std::size_t comma = s.find(',', start);
                    std::string part = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
                    literal(Token{part, {t->second.pos.line, col + static_cast<int>(start)}});
                    if (comma == std::string::npos)
                        break;
                    start = comma + 1;
                }
            }
        }
    }
};

} // namespace

Scenario parse_scenario(const std::string& text, const std::string& source)
{
    return Parser(text, source).run();
}

} // namespace phl
