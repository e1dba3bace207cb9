#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dspls {

/// A symmetric solve hit a pivot below the relative tolerance.
struct SingularMatrix : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thresholding zeroed every coordinate; no weight direction is recoverable.
struct DegenerateThreshold : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Every group-magnitude combination produced a zero weight vector.
struct EmptyGrid : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The deflation loop ran out of rank before producing a single component.
struct RankExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Iterative solver stopped at max_iter; carries the last iterate.
struct NoConvergence : std::runtime_error {
    std::vector<double> last_iterate;

    NoConvergence(const std::string& what, std::vector<double> iterate)
        : std::runtime_error(what), last_iterate(std::move(iterate)) {}
};

/// Malformed text input; line and column are 1-based.
struct ParseError : std::runtime_error {
    std::size_t line;
    std::size_t column;

    ParseError(const std::string& what, std::size_t line_, std::size_t column_ = 0)
        : std::runtime_error(what), line(line_), column(column_) {}
};

/// File could not be opened or written.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dspls
