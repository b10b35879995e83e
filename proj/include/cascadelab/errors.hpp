#pragma once

#include <stdexcept>
#include <string>

namespace cascadelab {

// A weight law whose parameters are syntactically valid but describe a
// degenerate cascade (conservation broken, mean off 1/2, or W0 == 1/2 a.s.).
struct DegenerateLaw : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed law input: bad parameter ranges, unreadable or non-conforming
// tables, probabilities that do not sum to one.
struct InvalidLaw : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Adaptive quadrature did not reach the requested tolerance within budget.
struct QuadratureFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tree depth outside the supported range.
struct DepthExceeded : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Argument outside an operation's mathematical domain.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Structurally invalid argument (counts, ranges, file formats) outside law parsing.
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Simplex-law operation applied at the wrong dimension.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An internal cross-check failed (e.g. a covariance assembled non-positive).
struct ConsistencyError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace cascadelab
