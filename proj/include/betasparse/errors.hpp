#pragma once

#include <stdexcept>
#include <string>

namespace betasparse {

// Precondition violations on scalar arguments (negative divergence inputs,
// beta outside [0,2], derivative requested where it does not exist).
using DomainError = std::domain_error;

// Shape and configuration errors (length mismatch, grid mismatch, bad sizes).
using InvalidArgument = std::invalid_argument;

// (A mu)_i = 0 while y_i > 0, or a zero denominator in a multiplicative step.
class DegenerateError : public std::runtime_error {
public:
    explicit DegenerateError(const std::string& what) : std::runtime_error(what) {}
};

// No constant shift can move A* lambda into the non-negative orthant.
class InfeasibleShiftError : public std::runtime_error {
public:
    explicit InfeasibleShiftError(const std::string& what) : std::runtime_error(what) {}
};

// A guaranteed-monotone iteration increased the loss.
class MonotonicityViolation : public std::logic_error {
public:
    explicit MonotonicityViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace betasparse
