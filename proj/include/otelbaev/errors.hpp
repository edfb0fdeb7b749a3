#pragma once

#include <stdexcept>
#include <string>

namespace otelbaev {

// Bad input: rejected measure data, parameters outside their domain, malformed scenarios.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An internal cross-check disagreed; the numbers cannot be trusted.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace otelbaev
