#pragma once

#include <stdexcept>
#include <string>

namespace ugraphon {

/// Invalid user input: malformed configs, broken tree invariants, bad parameters.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed to deliver a trustworthy answer.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ugraphon
