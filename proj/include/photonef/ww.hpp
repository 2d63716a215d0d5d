#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "photonef/grid.hpp"

namespace photonef {

// Discretised field modes w_a = (first + a) pi c / V with couplings
// g_a = sqrt(pi w_a / 2) dl.
struct WWModeSet {
  double omega0 = 0.4;
  double coupling = 0.01;
  double box_length = 0.0;
  double light_speed = 0.0;
  std::size_t first_index = 1;
  std::size_t n_modes = 0;

  Eigen::ArrayXd freqs, g;

  WWModeSet() = default;
  WWModeSet(double omega0, double coupling, double box_length, double light_speed,
            std::size_t first_index, std::size_t n_modes);

  double spacing() const;
  double gamma() const;
  // principal-value self energy of the band (removed in the ODE)
  double lamb_shift() const;
  // index of the mode at frequency w; throws ConfigError if none
  std::size_t index_of(double w) const;

  // Quasi-continuum: spacing = anchor/m with spacing <= gamma/spacing_ratio,
  // modes covering [w0 - band*gamma, w0 + band*gamma] (first mode >= spacing).
  static WWModeSet quasi_continuum(double omega0, double coupling, double anchor,
                                   double spacing_ratio = 10.0, double band = 30.0);
  // Mode set with a prescribed spacing, anchor on the lattice, same band rule.
  static WWModeSet with_spacing(double omega0, double coupling, double anchor, double spacing,
                                double band = 30.0);
};

struct WWCoefficients {
  double time = 0.0;
  std::complex<double> a, a_dot;
  Eigen::ArrayXcd b, b_dot;
  double truncation_deficit = 0.0;
};

WWCoefficients ww_closed_form(const WWModeSet& modes, double t);
// exact single-excitation dynamics; throws InvariantViolation if the norm drifts by > 1e-8
std::vector<WWCoefficients> ww_ode_integrate(const WWModeSet& modes, const std::vector<double>& t_grid);

// One-dimensional cut along q_i with all other q = 0.  Arrays carry the
// mode-i Gaussian; the transverse constant prod_{j != i} G_j(0) is kept as a log.
struct CrossSection {
  std::size_t mode = 0;
  double omega_i = 0.0;
  double time = 0.0;
  QGrid grid;
  Eigen::Matrix2Xcd psi;
  Eigen::ArrayXd chi_abs;
  double log_transverse_constant = 0.0;
  Eigen::Matrix2Xcd phi, dphi, d2phi, dphi_dt;
  Eigen::ArrayXd transverse_kinetic;
  Eigen::Array<bool, Eigen::Dynamic, 1> mask;
};

CrossSection cross_section_state(const WWCoefficients& c, const WWModeSet& modes, std::size_t i,
                                 const QGrid& grid);

// |sum_M Phi^dag(0) Phi(t) dq|^2 / (sum_M dq)^2 over the common mask M
double autocorr_phi(const CrossSection& c0, const CrossSection& ct);

}  // namespace photonef
