#ifndef PHL_CLI_HPP
#define PHL_CLI_HPP

#include <optional>
#include <string>
#include <vector>

#include "phl/report.hpp"
#include "phl/scenario.hpp"

namespace phl {

/// Command-line overrides of scenario check parameters.
struct RunOptions
{
    std::optional<Index> dim_bound;
    std::optional<int> samples;
    std::optional<std::uint64_t> seed;
    std::optional<int> max_support;
    std::optional<Index> max_dim;
    bool recheck = false;
};

/// validate, pullback, milnor, separated, gamma, tilting, derived,
/// counterexample, run. selftest is separate.
const std::vector<std::string>& commands();

/// Builds and validates the scenario, then runs the command. Invalid
/// scenarios throw InputError (exit code 1).
Report run_command(const std::string& command, const Scenario& scenario, const RunOptions& options = {});

struct BundledScenario
{
    std::string name;
    std::string text;
};

/// The bundled example library, sorted by name.
const std::vector<BundledScenario>& bundled_scenarios();

/// `run` on every bundled scenario, checks prefixed by scenario name.
Report selftest(const RunOptions& options = {});

} // namespace phl

#endif // PHL_CLI_HPP
