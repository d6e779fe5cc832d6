#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "phl/cli.hpp"

namespace {

// A path on disk, or the name of a bundled scenario.
std::pair<std::string, std::string> load(const std::string& arg)
{
    std::ifstream in(arg);
    if (in) {
        std::ostringstream s;
        s << in.rdbuf();
        return {s.str(), arg};
    }
    for (const auto& b : phl::bundled_scenarios())
        if (b.name == arg)
            return {b.text, b.name};
    throw phl::InputError("cannot open scenario '" + arg + "' (not a file or a bundled name)");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Pullback rings, gluing triples and derived epivalence checks"};
    app.set_help_all_flag("--help-all");

    std::string command, file, format = "text";
    phl::RunOptions opts;
    bool verbose = false;
    long long dim_bound = -1, samples = -1, max_support = -1, max_dim = -1;
    std::uint64_t seed = 0;

    std::vector<std::string> choices = phl::commands();
    choices.push_back("selftest");
    choices.push_back("list");
    app.add_option("command", command, "validate | pullback | milnor | separated | gamma | tilting | derived | "
                                       "counterexample | run | selftest | list")
        ->required()
        ->check(CLI::IsMember(choices));
    app.add_option("scenario", file, "scenario file or bundled scenario name");
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed");
    app.add_option("--dim-bound", dim_bound, "dimension bound for milnor")->check(CLI::NonNegativeNumber);
    app.add_option("--samples", samples, "sample count (seeds for derived)")->check(CLI::NonNegativeNumber);
    app.add_option("--max-support", max_support, "support length of random complexes")->check(CLI::PositiveNumber);
    app.add_option("--max-dim", max_dim, "term dimension bound")->check(CLI::NonNegativeNumber);
    app.add_option("--format", format, "report format")->check(CLI::IsMember({"text", "json"}));
    app.add_flag("--verbose", verbose, "print witnesses as exact matrices");
    app.add_flag("--recheck", opts.recheck, "re-verify every stored certificate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }
    if (dim_bound >= 0)
        opts.dim_bound = dim_bound;
    if (samples >= 0)
        opts.samples = static_cast<int>(samples);
    if (max_support >= 0)
        opts.max_support = static_cast<int>(max_support);
    if (max_dim >= 0)
        opts.max_dim = max_dim;
    if (*seed_opt)
        opts.seed = seed;

    try {
        if (command == "list") {
            for (const auto& b : phl::bundled_scenarios())
                std::cout << b.name << "\n";
            return 0;
        }
        phl::Report report;
        if (command == "selftest") {
            report = phl::selftest(opts);
        } else {
            if (file.empty()) {
                std::cerr << "error: command '" << command << "' needs a scenario\n";
                return 1;
            }
            auto [text, name] = load(file);
            report = phl::run_command(command, phl::parse_scenario(text, name), opts);
        }
        std::cout << (format == "json" ? report.json(verbose) : report.text(verbose));
        return report.exit_code();
    } catch (const phl::ScenarioError& e) {
        std::cerr << (file.empty() ? "selftest" : file) << ":" << e.what() << "\n";
        return 1;
    } catch (const phl::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const phl::HardFailure& e) {
        std::cerr << "hard failure: " << e.what() << "\n";
        return 2;
    } catch (const phl::HypothesisRefused& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 3;
    }
}
