#pragma once

#include <memory>
#include <string>
#include <vector>

#include "photonef/model.hpp"

namespace photonef {

enum class Method { split_operator, crank_nicolson };

Method parse_method(const std::string& s);
std::string to_string(Method m);

struct PropagatorConfig {
  double dt = 0.005;
  std::size_t n_steps = 400000;
  std::size_t save_stride = 1000;
  Method method = Method::split_operator;

  // throws ConfigError
  void validate(const ModelParams& params) const;
};

struct Trajectory {
  std::vector<SpinorField> frames;
  PropagatorConfig config;
};

inline constexpr double kNormTolerance = 1e-8;
inline constexpr double kEdgeTolerance = 1e-10;

// Fixed-step engine.  dt may be negative (backward steps).
class Propagator {
 public:
  Propagator(const ModelParams& params, const QGrid& grid, Method method, double dt);
  ~Propagator();
  Propagator(Propagator&&) noexcept;
  Propagator& operator=(Propagator&&) noexcept;

  void advance(SpinorField& state, std::size_t steps = 1);
  double dt() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// throws InvariantViolation on norm drift or density reaching the edges
void check_frame(const SpinorField& state);
double edge_density(const SpinorField& state);

Trajectory propagate(const SpinorField& initial, const ModelParams& params, const PropagatorConfig& cfg);

// <H> with a spectral kinetic term
double energy_expectation(const SpinorField& state, const ModelParams& params);

}  // namespace photonef
