#ifndef PHL_DIAGNOSTICS_HPP
#define PHL_DIAGNOSTICS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace phl {

/// Malformed input: bad scenario text, invalid algebra data, mismatched shapes.
class InputError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A property that must hold under verified hypotheses did not.
class HardFailure : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A check was asked to run on data violating one of its hypotheses.
class HypothesisRefused : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Accumulated findings of a verification pass. Failures are violated
/// identities; notes are informational (verdict flags, skipped legs).
struct Diagnostics
{
    std::vector<std::string> failures;
    std::vector<std::string> notes;

    bool ok() const { return failures.empty(); }
    void fail(std::string what) { failures.push_back(std::move(what)); }
    void note(std::string what) { notes.push_back(std::move(what)); }
    void absorb(const Diagnostics& other, const std::string& prefix = {})
    {
        for (const auto& f : other.failures)
            failures.push_back(prefix + f);
        for (const auto& n : other.notes)
            notes.push_back(prefix + n);
    }
    /// First failure, or the empty string.
    std::string first() const { return failures.empty() ? std::string() : failures.front(); }
};

} // namespace phl

#endif // PHL_DIAGNOSTICS_HPP
