#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "photonef/grid.hpp"

namespace photonef {

// Two-level emitter coupled to cavity modes (hbar = 1).
//   H = sum_a (-1/2 d_a^2 + 1/2 w_a^2 q_a^2) + diag(+w0/2, -w0/2)
//       + sum_a w_a dl_a q_a sigma_x
// Component 0 is the excited level.
struct ModelParams {
  double omega0 = 0.4;
  std::vector<double> mode_freqs{0.4};
  std::vector<double> couplings{0.01};

  std::size_t n_modes() const { return mode_freqs.size(); }
  void validate() const;

  static ModelParams single_mode(double omega0, double coupling);
};

// Spinor on a grid, stored as a 2 x N matrix (column k = point k).
struct SpinorField {
  QGrid grid;
  Eigen::Matrix2Xcd values;
  double time = 0.0;

  SpinorField() = default;
  SpinorField(QGrid g, double t = 0.0) : grid(std::move(g)), values(2, grid.size()), time(t) {
    values.setZero();
  }

  Eigen::ArrayXd density() const { return values.colwise().squaredNorm().transpose().array(); }
  double norm() const { return density().sum() * grid.cell_volume(); }
  void normalize();
};

struct QboSurfaces {
  Eigen::ArrayXd lower, upper;
  // real eigenvectors, 2 x N
  Eigen::Matrix2Xd vec_lower, vec_upper;
};

// sum_a w_a dl_a q_a at every grid point
Eigen::ArrayXd coupling_field(const ModelParams& params, const QGrid& grid);
Eigen::ArrayXd harmonic_potential(const ModelParams& params, const QGrid& grid);

QboSurfaces qbo_surfaces(const ModelParams& params, const QGrid& grid);

enum class InitialState { qbo_excited, factorized_excited };

InitialState parse_initial_state(const std::string& s);
std::string to_string(InitialState s);

// photon vacuum prod_a (w_a/pi)^(1/4) exp(-w_a q_a^2/2), sampled on the grid
Eigen::ArrayXd vacuum_amplitude(const ModelParams& params, const QGrid& grid);

SpinorField build_initial_state(InitialState kind, const ModelParams& params, const QGrid& grid);

}  // namespace photonef
