#ifndef PHL_REPORT_HPP
#define PHL_REPORT_HPP

#include <functional>
#include <string>
#include <vector>

#include "phl/diagnostics.hpp"

namespace phl {

enum class Status { pass, fail, refused, skipped, info };

std::string to_string(Status s);

/// One named check. `lines` is the witness summary shown by default;
/// `witnesses` holds exact matrices shown only in verbose mode.
/// `certificates` re-verify stored witnesses without redoing any search.
struct Check
{
    std::string id;
    Status status = Status::pass;
    std::vector<std::string> lines;
    std::vector<std::string> witnesses;
    std::vector<std::function<bool()>> certificates;

    void add(std::string line) { lines.push_back(std::move(line)); }
    void witness(std::string w) { witnesses.push_back(std::move(w)); }
    void certify(std::function<bool()> f) { certificates.push_back(std::move(f)); }
    void fail(std::string why)
    {
        status = Status::fail;
        lines.push_back("FAIL: " + std::move(why));
    }
    void refuse(std::string why)
    {
        status = Status::refused;
        lines.push_back("refused: " + std::move(why));
    }
    /// Folds failures in as failed lines and notes as plain lines.
    void absorb(const Diagnostics& d, const std::string& prefix = {});
    bool passed() const { return status == Status::pass || status == Status::info || status == Status::skipped; }
};

struct Report
{
    std::string title;
    std::vector<Check> checks;

    Check& add(Check c)
    {
        checks.push_back(std::move(c));
        return checks.back();
    }
    void append(const Report& other);
    /// 0 all passed, 2 some hard failure, 3 some refusal and no failure.
    int exit_code() const;
    /// Runs every stored certificate; failing ones turn their check red.
    int recheck();
    std::string text(bool verbose) const;
    std::string json(bool verbose) const;
};

} // namespace phl

#endif // PHL_REPORT_HPP
