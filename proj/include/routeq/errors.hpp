#pragma once

#include <stdexcept>
#include <string>

namespace routeq {

// Malformed input text; carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, long line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

// Structurally valid input that violates a model requirement (missing depot,
// infeasible totals, inconsistent dimensions).
class StructuralError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input uses a feature outside the supported subset (e.g. non-EUC_2D metric).
class UnsupportedFormatError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Request exceeds a hard capability bound (e.g. Held-Karp subset size).
class CapabilityError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Well-formed arguments that do not fit together (mixed instances, mixed specs).
class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Degenerate numeric input (e.g. Gini of an all-zero workload vector).
class DegenerateInputError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace routeq
