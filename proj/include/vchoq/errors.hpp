#pragma once

#include <stdexcept>
#include <string>

namespace vchoq {

// Argument outside the mathematical domain of an operation (t outside [0,1],
// negative base for a power, non-finite range bounds).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Caller asked for something the API does not support (unknown suite id,
// bad configuration value, zero samples).
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

// A validated precondition on the input failed (e.g. declared monotone
// direction does not hold).
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what)
      : std::invalid_argument(what) {}
};

// A user-supplied object broke its own contract (negative capacity value).
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what)
      : std::logic_error(what) {}
};

}  // namespace vchoq
