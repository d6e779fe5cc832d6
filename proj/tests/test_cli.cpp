#include <gtest/gtest.h>

#include "phl/cli.hpp"

using namespace phl;

namespace {

const char* tiny = R"(scenario tiny
field Q
algebra A {
  basis 1 x
  unit 1 0
  sc 0 0 0 1
  sc 0 1 1 1
  sc 1 0 1 1
}
algebra K {
  basis 1
  unit 1
  sc 0 0 0 1
}
morphism p A -> K {
  1 0
}
morphism q K -> K {
  1
}
diagram p q
checks {
  validate
  pullback
}
)";

Pos error_pos(const std::string& text)
{
    try {
        parse_scenario(text);
    } catch (const ScenarioError& e) {
        return e.pos();
    }
    return {};
}

std::string error_text(const std::string& text, const std::string& command = "validate")
{
    try {
        run_command(command, parse_scenario(text));
    } catch (const InputError& e) {
        return e.what();
    }
    return {};
}

std::string replace(std::string s, const std::string& from, const std::string& to)
{
    auto at = s.find(from);
    EXPECT_NE(at, std::string::npos) << from;
    return s.replace(at, from.size(), to);
}

} // namespace

TEST(Scenario, ParsesTinyExample)
{
    Scenario s = parse_scenario(tiny);
    EXPECT_EQ(*s.title, "tiny");
    ASSERT_EQ(s.algebras.size(), 2u);
    EXPECT_EQ(s.algebras[0].constants.size(), 3u);
    EXPECT_EQ(s.checks.size(), 2u);
    Report r = run_command("run", s);
    EXPECT_EQ(r.exit_code(), 0);
    EXPECT_EQ(r.checks.size(), 2u);
}

TEST(Scenario, EmptyFileHasNoChecks)
{
    Scenario s = parse_scenario("");
    EXPECT_TRUE(s.empty());
    EXPECT_EQ(run_command("run", s).checks.size(), 0u);
    EXPECT_TRUE(parse_scenario("# only a comment\n\n").empty());
}

TEST(Scenario, UnknownKeysRejectedWithPosition)
{
    Pos p = error_pos(replace(tiny, "  unit 1 0\n", "  unit 1 0\n  colour red\n"));
    EXPECT_EQ(p.line, 6);
    EXPECT_EQ(p.col, 3);
    p = error_pos(replace(tiny, "diagram p q", "diagramm p q"));
    EXPECT_EQ(p.line, 21);
    EXPECT_EQ(p.col, 1);
    p = error_pos(replace(tiny, "  pullback\n", "  pullback depth=3\n"));
    EXPECT_EQ(p.line, 24);
    EXPECT_EQ(p.col, 12);
    p = error_pos(replace(tiny, "  pullback\n", "  nonsense\n"));
    EXPECT_EQ(p.line, 24);
}

TEST(Scenario, SyntaxErrors)
{
    EXPECT_EQ(error_pos(replace(tiny, "  sc 1 0 1 1\n", "  sc 1 0 1\n")).line, 8);
    EXPECT_EQ(error_pos(replace(tiny, "  sc 1 0 1 1\n", "  sc 1 0 5 1\n")).line, 8);
    EXPECT_EQ(error_pos(replace(tiny, "  sc 1 0 1 1\n", "  sc 1 0 1 1/0\n")).col, 12);
    EXPECT_EQ(error_pos(replace(tiny, "field Q", "field F4")).line, 2);
    // Unclosed block points at its opener.
    Pos p = error_pos("field Q\nalgebra A {\n  basis 1\n");
    EXPECT_EQ(p.line, 2);
    // Wrong matrix shape, reported at the morphism name.
    EXPECT_EQ(error_pos(replace(tiny, "  1 0\n}", "  1 0 0\n}")).line, 15);
    // Ragged rows.
    EXPECT_EQ(error_pos(replace(tiny, "  1 0\n}", "  1 0\n  1\n}")).line, 17);
    // Missing field line.
    EXPECT_EQ(error_pos(replace(tiny, "field Q\n", "")).line, 2);
}

TEST(Scenario, FiniteFieldLiteralsAreIntegers)
{
    std::string f2 = replace(tiny, "field Q", "field F3");
    EXPECT_NO_THROW(parse_scenario(replace(f2, "  unit 1 0\n", "  unit 4 0\n")));
    EXPECT_EQ(error_pos(replace(f2, "  unit 1 0\n", "  unit 1/2 0\n")).line, 5);
}

TEST(Scenario, UnresolvedReferences)
{
    EXPECT_EQ(error_pos(replace(tiny, "morphism p A -> K", "morphism p A -> L")).col, 17);
    EXPECT_EQ(error_pos(replace(tiny, "diagram p q", "diagram p r")).col, 11);
    EXPECT_EQ(error_pos(replace(tiny, "algebra K {", "algebra A {")).line, 10);
    std::string no_diagram = replace(tiny, "diagram p q\n", "");
    EXPECT_EQ(error_pos(no_diagram).line, 23);
}

TEST(Scenario, BrokenAssociativityNamesIndices)
{
    // x * 1 = 2x while 1 is the unit: the unit law or associativity breaks.
    std::string bad = replace(tiny, "  sc 1 0 1 1\n", "  sc 1 0 1 2\n");
    std::string what = error_text(bad);
    EXPECT_NE(what.find("algebra A"), std::string::npos) << what;
    EXPECT_NE(what.find("(i,j,m,k)"), std::string::npos) << what;
    EXPECT_EQ(what.rfind("3:", 0), 0u) << what;
}

TEST(Scenario, InvalidMorphismRejected)
{
    std::string what = error_text(replace(tiny, "  1 0\n}", "  1 1\n}"));
    EXPECT_NE(what.find("morphism p"), std::string::npos) << what;
}

TEST(Scenario, ModulesAndComplexes)
{
    std::string extra = R"(module M over A {
  dim 2
  act 0 {
    1 0
    0 1
  }
  act 1 {
    0 0
    1 0
  }
}
complex P over A {
  lo -1
  terms M M
  d -1 {
    0 0
    1 0
  }
}
)";
    std::string text = replace(tiny, "diagram p q\n", "diagram p q\n" + extra);
    Report r = run_command("validate", parse_scenario(text));
    ASSERT_EQ(r.checks.size(), 1u);
    EXPECT_EQ(r.checks[0].status, Status::pass);
    // E11 does not commute with the action of x.
    std::string bad = replace(text, "d -1 {\n    0 0\n    1 0", "d -1 {\n    1 0\n    0 0");
    EXPECT_NE(error_text(bad).find("complex P"), std::string::npos);
    std::string wrong_algebra = replace(text, "complex P over A", "complex P over K");
    EXPECT_GT(error_pos(wrong_algebra).line, 0);
}

TEST(Bundled, AllParseAndValidate)
{
    ASSERT_GE(bundled_scenarios().size(), 6u);
    for (const auto& b : bundled_scenarios()) {
        Scenario s = parse_scenario(b.text, b.name);
        Report r = run_command("validate", s);
        ASSERT_EQ(r.checks.size(), 1u) << b.name;
        EXPECT_EQ(r.checks[0].status, Status::pass) << b.name;
    }
}

TEST(Commands, ExitCodes)
{
    auto get = [](const std::string& n) {
        for (const auto& b : bundled_scenarios())
            if (b.name == n)
                return parse_scenario(b.text, b.name);
        throw std::runtime_error(n);
    };
    EXPECT_EQ(run_command("milnor", get("e2_f2")).exit_code(), 3);
    EXPECT_EQ(run_command("counterexample", get("e2_f2")).exit_code(), 0);
    EXPECT_EQ(run_command("pullback", get("e1_f2")).exit_code(), 0);
    EXPECT_EQ(run_command("tilting", get("e2_f2")).exit_code(), 3);
    // Expected refusals become informational under `run`.
    Report run = run_command("run", get("e2_f2"));
    EXPECT_EQ(run.exit_code(), 0);
    EXPECT_THROW(run_command("frobnicate", get("e1_f2")), InputError);
}

TEST(Commands, ExpectRefusedFailsWhenNothingRefuses)
{
    std::string text = replace(tiny, "  pullback\n", "  milnor expect=refused\n");
    Report r = run_command("run", parse_scenario(text));
    EXPECT_EQ(r.exit_code(), 2);
}

TEST(Commands, OverridesAndRecheck)
{
    Scenario s;
    for (const auto& b : bundled_scenarios())
        if (b.name == "e1_f2")
            s = parse_scenario(b.text, b.name);
    RunOptions o;
    o.samples = 1;
    o.max_support = 2;
    o.max_dim = 4;
    o.recheck = true;
    Report r = run_command("derived", s, o);
    EXPECT_EQ(r.exit_code(), 0) << r.text(false);
    EXPECT_EQ(r.checks.back().id, "recheck");
    EXPECT_EQ(r.text(false), run_command("derived", s, o).text(false));
}

TEST(Commands, TwistParameter)
{
    Scenario s;
    for (const auto& b : bundled_scenarios())
        if (b.name == "e2_f2")
            s = parse_scenario(b.text, b.name);
    EXPECT_EQ(run_command("counterexample", s).exit_code(), 0);
    std::string bad;
    for (const auto& b : bundled_scenarios())
        if (b.name == "e2_f2")
            bad = replace(b.text, "twist=1,1", "twist=1,1,0");
    EXPECT_THROW(run_command("counterexample", parse_scenario(bad)), ScenarioError);
}

TEST(Report, JsonCarriesTheSameChecks)
{
    Scenario s = parse_scenario(tiny);
    Report r = run_command("run", s);
    std::string j = r.json(false);
    for (const auto& c : r.checks)
        EXPECT_NE(j.find("\"id\": \"" + c.id + "\""), std::string::npos);
    EXPECT_EQ(r.text(true).find("i1 ="), r.text(true).find("i1 ="));
    EXPECT_NE(r.text(true).find("i1 ="), std::string::npos);
    EXPECT_EQ(r.text(false).find("i1 ="), std::string::npos);
}
