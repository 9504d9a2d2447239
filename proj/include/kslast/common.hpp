#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace kslast {

/// Thrown when an iterative scheme fails its convergence contract: a series
/// that does not settle within its term budget, a bracket search that finds
/// no sign change, or a computed table that violates a structural guarantee.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One line of a verification suite: human-readable text plus a verdict.
struct CheckLine {
    std::string text;
    bool pass = false;
};

/// Ordered list of verification lines with an aggregate verdict.
struct CheckList {
    std::vector<CheckLine> lines;

    void add(bool pass, std::string text) { lines.push_back({std::move(text), pass}); }
    void merge(const CheckList& other) {
        lines.insert(lines.end(), other.lines.begin(), other.lines.end());
    }
    int failures() const {
        int n = 0;
        for (const auto& l : lines)
            if (!l.pass) ++n;
        return n;
    }
    bool all_pass() const { return failures() == 0; }
};

/// Formats a double with enough digits to round-trip (used by every text
/// serialization so identical inputs produce identical bytes).
std::string format_full(double v);

/// Rounds half-to-even at two decimals and formats with exactly two digits
/// after the point.
std::string format_2dp(double v);

} // namespace kslast
