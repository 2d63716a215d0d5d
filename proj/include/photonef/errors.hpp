#pragma once

#include <stdexcept>

namespace photonef {

// bad input: config values, grids, mode sets
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// a physical invariant broke during a run (norm drift, edge density, ...)
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CutoffError : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

}  // namespace photonef
