#pragma once

#include <stdexcept>
#include <string>

namespace rglab {

/// Arguments outside an operation's domain (K > P, mismatched node counts, ...).
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// A construction whose preconditions cannot be met for the given parameters,
/// e.g. the binomial coupling when K <= 3 ln n.
class Infeasible : public std::runtime_error {
public:
    explicit Infeasible(const std::string& what) : std::runtime_error(what) {}
};

/// Asymptotic formula evaluated outside the range where it is defined.
class DegenerateRegime : public std::runtime_error {
public:
    explicit DegenerateRegime(const std::string& what) : std::runtime_error(what) {}
};

/// The exhaustive oracle refuses inputs whose enumeration would blow up.
class OracleRefused : public std::runtime_error {
public:
    explicit OracleRefused(const std::string& what) : std::runtime_error(what) {}
};

/// A guarantee that holds by construction was observed to fail.
class InvariantViolation : public std::logic_error {
public:
    explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

} // namespace rglab
