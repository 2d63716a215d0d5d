#pragma once

#include <vector>

#include <Eigen/Dense>

#include "photonef/model.hpp"
#include "photonef/propagator.hpp"

namespace photonef {

// Truncated product basis |s, n_1, ..., n_M>, n_a <= n_max.
class FockBasis {
 public:
  FockBasis(const ModelParams& params, std::size_t n_max);

  std::size_t n_max() const { return n_max_; }
  std::size_t photon_states() const { return n_photon_; }
  std::size_t dim() const { return 2 * n_photon_; }
  // occupation of mode a in photon state p
  std::size_t occupation(std::size_t p, std::size_t a) const;

  Eigen::MatrixXd hamiltonian() const;
  // population in states whose occupation of any mode is >= n_max - 1
  double top_population(const Eigen::VectorXcd& c) const;

  Eigen::VectorXcd project(const SpinorField& psi) const;
  SpinorField to_grid(const Eigen::VectorXcd& c, const QGrid& grid, double time) const;
  // mean photon number per mode
  std::vector<double> photon_numbers(const Eigen::VectorXcd& c) const;

 private:
  ModelParams params_;
  std::size_t n_max_;
  std::size_t n_photon_;
  // (photon state) x (flat grid point)
  Eigen::MatrixXd basis_on_grid(const QGrid& grid) const;
};

// rows 0..n_max, columns = points: normalised Hermite functions of frequency w
Eigen::MatrixXd hermite_functions(const Eigen::ArrayXd& q, double w, std::size_t n_max);

inline constexpr double kCutoffTolerance = 1e-10;

// Exact propagation in the truncated Fock basis; frames at the same times
// propagate() would store.  Throws CutoffError when the top two levels hold
// more than kCutoffTolerance.
Trajectory fock_oracle_propagate(const SpinorField& initial, const ModelParams& params,
                                 const PropagatorConfig& cfg, std::size_t n_max = 40);

}  // namespace photonef
