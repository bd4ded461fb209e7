#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssrc {

/// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A caller violated an operation's contract (bad sizes, bad ranges, ...).
struct ContractError : Error {
    using Error::Error;
};

/// Input data is degenerate for the requested operation (constant series, empty file, ...).
struct DegenerateInputError : Error {
    using Error::Error;
};

/// Malformed on-disk data. `line` is 1-based; 0 when not line-addressable.
struct ParseError : Error {
    std::size_t line = 0;
    ParseError(const std::string& msg, std::size_t line_no = 0)
        : Error(line_no ? msg + " (line " + std::to_string(line_no) + ")" : msg), line(line_no) {}
};

struct IoError : Error {
    using Error::Error;
};

/// A numerical iteration left the admissible region (diverging trajectory).
struct DivergenceError : Error {
    using Error::Error;
};

/// An iterative solver did not reach its tolerance within the budget.
struct ConvergenceError : Error {
    using Error::Error;
};

/// A linear system is too ill-conditioned to solve as posed.
struct IllConditionedError : Error {
    using Error::Error;
};

/// Every trial of a hyperparameter search failed; per-trial causes attached.
struct OptimizationError : Error {
    std::vector<std::string> causes;
    OptimizationError(const std::string& msg, std::vector<std::string> trial_causes)
        : Error(msg), causes(std::move(trial_causes)) {}
};

}  // namespace ssrc
