#pragma once

#include <stdexcept>
#include <string>

namespace bridgelab {

// Bad argument values or shapes passed to an operation.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// A spec object (design, penalty, config) that cannot be realized.
class InvalidSpec : public InvalidInput {
 public:
  explicit InvalidSpec(const std::string& what) : InvalidInput(what) {}
};

// Evaluation point outside the parameter box.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Tuning schedule whose growth exponent is not covered by any limit theorem.
class UnsupportedRegime : public std::runtime_error {
 public:
  explicit UnsupportedRegime(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bridgelab
