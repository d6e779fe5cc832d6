#ifndef PHL_SCENARIO_HPP
#define PHL_SCENARIO_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "phl/diagnostics.hpp"
#include "phl/exactlin.hpp"

namespace phl {

/// 1-based line and column.
struct Pos
{
    int line = 0;
    int col = 0;

    std::string str() const { return std::to_string(line) + ":" + std::to_string(col); }
};

struct Token
{
    std::string text;
    Pos pos;
};

/// Syntax or reference error at a position of the scenario text.
class ScenarioError : public InputError
{
public:
    ScenarioError(const Pos& pos, const std::string& what)
        : InputError(pos.str() + ": " + what), pos_(pos)
    {}
    const Pos& pos() const { return pos_; }

private:
    Pos pos_;
};

/// Rows of literal tokens, parsed against the field later.
using TokenMatrix = std::vector<std::vector<Token>>;

struct AlgebraSpec
{
    Token name;
    std::vector<Token> basis;
    std::vector<Token> unit;
    /// (i, j, k, value): b_i b_j has coefficient value on b_k.
    struct Constant
    {
        Index i = 0, j = 0, k = 0;
        Token value;
    };
    std::vector<Constant> constants;
    /// Vectors as rows.
    std::optional<TokenMatrix> radical, idempotents;
};

struct MorphismSpec
{
    Token name, source, target;
    TokenMatrix rows;
};

struct ModuleSpec
{
    Token name, algebra;
    Index dim = 0;
    /// act(i) per basis vector of the algebra.
    std::map<Index, TokenMatrix> act;
    std::map<Index, Pos> act_pos;
};

struct ComplexSpec
{
    Token name, algebra;
    int lo = 0;
    std::vector<Token> terms;
    /// d^n keyed by n.
    std::map<int, TokenMatrix> diffs;
    std::map<int, Pos> diff_pos;
};

struct CheckSpec
{
    Token name;
    std::map<std::string, Token> params;
};

struct Scenario
{
    std::string source;
    std::optional<std::string> title;
    std::optional<FieldSpec> field;
    Pos field_pos;
    std::vector<AlgebraSpec> algebras;
    std::vector<MorphismSpec> morphisms;
    std::vector<ModuleSpec> modules;
    std::vector<ComplexSpec> complexes;
    /// Morphisms playing pi1 and pi2.
    std::optional<std::pair<Token, Token>> diagram;
    std::vector<CheckSpec> checks;

    bool empty() const { return algebras.empty() && morphisms.empty() && checks.empty() && !field; }
};

/// Check names with the parameter keys each accepts (besides `expect`).
const std::map<std::string, std::vector<std::string>>& check_parameters();

/// Parses the line-oriented format; ScenarioError on unknown keys,
/// malformed blocks and unresolved names.
Scenario parse_scenario(const std::string& text, const std::string& source = "<scenario>");

} // namespace phl

#endif // PHL_SCENARIO_HPP
