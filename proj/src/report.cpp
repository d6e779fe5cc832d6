#include "phl/report.hpp"

#include <sstream>

#include <json.hpp>

namespace phl {

std::string to_string(Status s)
{
    switch (s) {
    case Status::pass:
        return "pass";
    case Status::fail:
        return "FAIL";
    case Status::refused:
        return "refused";
    case Status::skipped:
        return "skipped";
    case Status::info:
        return "info";
    }
    return "?";
}

void Check::absorb(const Diagnostics& d, const std::string& prefix)
{
    for (const auto& n : d.notes)
        add(prefix + n);
    for (const auto& f : d.failures)
        fail(prefix + f);
}

void Report::append(const Report& other)
{
    for (const auto& c : other.checks)
        checks.push_back(c);
}

int Report::exit_code() const
{
    bool refused = false;
    for (const auto& c : checks) {
        if (c.status == Status::fail)
            return 2;
        if (c.status == Status::refused)
            refused = true;
    }
    return refused ? 3 : 0;
}

int Report::recheck()
{
    int total = 0;
    for (auto& c : checks)
        for (const auto& cert : c.certificates) {
            ++total;
            if (!cert())
                c.fail("certificate did not re-verify");
        }
    return total;
}

std::string Report::text(bool verbose) const
{
    std::ostringstream out;
    if (!title.empty())
        out << "== " << title << " ==\n";
    for (const auto& c : checks) {
        out << "[" << to_string(c.status) << "] " << c.id << "\n";
        for (const auto& l : c.lines)
            out << "    " << l << "\n";
        if (verbose)
            for (const auto& w : c.witnesses) {
                std::istringstream in(w);
                std::string line;
                while (std::getline(in, line))
                    out << "      | " << line << "\n";
            }
    }
    int passed = 0;
    for (const auto& c : checks)
        passed += c.passed() ? 1 : 0;
    out << passed << "/" << checks.size() << " checks passed\n";
    return out.str();
}

std::string Report::json(bool verbose) const
{
    nlohmann::ordered_json j;
    j["title"] = title;
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json cj;
        cj["id"] = c.id;
        cj["status"] = to_string(c.status);
        cj["lines"] = c.lines;
        if (verbose)
            cj["witnesses"] = c.witnesses;
        j["checks"].push_back(cj);
    }
    j["exit_code"] = exit_code();
    return j.dump(2) + "\n";
}

} // namespace phl
