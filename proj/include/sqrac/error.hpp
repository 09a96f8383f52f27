#pragma once

#include <stdexcept>
#include <string>

namespace sqrac {

/// Input outside the domain of an operation (bad Bloch length, infeasible
/// witness value, non-Hermitian operator, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A Kraus branch with zero probability was asked for its post-measurement state.
class UnreachableOutcome : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Statistics that no quantum strategy can produce (e.g. certify() with
/// eta_lo > eta_hi).
class InfeasibleInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sqrac
