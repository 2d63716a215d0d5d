#pragma once

#include <vector>

#include <Eigen/Dense>

#include "photonef/model.hpp"
#include "photonef/ww.hpp"

namespace photonef {

inline constexpr double kMaskThreshold = 1e-12;

using Mask = Eigen::Array<bool, Eigen::Dynamic, 1>;

struct Factorization {
  QGrid grid;
  double time = 0.0;
  Eigen::ArrayXd chi_abs, phase;
  Eigen::Matrix2Xcd phi;
  // per axis: dPhi, d2Phi, the gauge gradient used for them, and the
  // central-difference residual A = Im(Phi^dag dPhi)
  std::vector<Eigen::Matrix2Xcd> dphi, d2phi;
  std::vector<Eigen::ArrayXd> gauge_gradient, tdvp_residual;
  Mask mask;
  // flat index where S = 0
  std::size_t anchor = 0;
  // 2-D only: max phase mismatch between the two integration orders
  double path_mismatch = 0.0;

  Eigen::Matrix2Xcd reconstruct() const;
  Eigen::ArrayXd density() const { return chi_abs.square(); }
};

Eigen::ArrayXd gauge_phase(const SpinorField& psi);
// along with the other-order mismatch (2-D)
Eigen::ArrayXd gauge_phase(const SpinorField& psi, double& path_mismatch);

Factorization extract_conditional(const SpinorField& psi, const Eigen::ArrayXd& phase);
Factorization factorize(const SpinorField& psi);

struct SurfaceDecomposition {
  double time = 0.0;
  Eigen::ArrayXd eps_wbo, eps_kin, eps_gd, eps_total;
  // direct evaluation of the potential from Phi^dag H Phi etc.
  Eigen::ArrayXd eps_direct;
  // Born-Huang weights |C1|^2 (upper) and |C2|^2 (lower)
  Eigen::ArrayXd c_upper_abs2, c_lower_abs2;
  // largest |Im| over the mask of the wBO and kinetic integrands
  double max_imag = 0.0;
  Mask mask;
};

// either neighbour may be null (one-sided time derivative); not both
SurfaceDecomposition decompose_tdpes(const Factorization& f, const Factorization* prev,
                                     const Factorization* next, const QboSurfaces& surfaces,
                                     const ModelParams& params);

// WW cut: wBO from the mode-i qBO pair at q_bar = 0, analytic derivatives
SurfaceDecomposition decompose_cross_section(const CrossSection& cs, const WWModeSet& modes);

// throws InvariantViolation when eps_gd from frames at +-2 delta differs from
// that at +-delta by more than 1% (L-inf on the mask)
void check_frame_spacing(const SurfaceDecomposition& fine, const SurfaceDecomposition& coarse);

struct GaugeReport {
  double reconstruction_change = 0.0;
  double wbo_change = 0.0;
  double kinetic_change = 0.0;
  // A' - A - dtheta (numerical dtheta)
  double a_shift_error = 0.0;
  // A' - A on every grid point (nan off the mask)
  std::vector<Eigen::ArrayXd> a_shift;

  bool passed(double tol = 1e-8) const {
    return reconstruction_change <= tol && wbo_change <= tol && kinetic_change <= tol &&
           a_shift_error <= tol;
  }
};

GaugeReport gauge_transform_check(const Factorization& f, const QboSurfaces& surfaces,
                                  const ModelParams& params, const Eigen::ArrayXd& theta);

}  // namespace photonef
