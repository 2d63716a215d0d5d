#pragma once

#include <string>
#include <vector>

#include "photonef/factorization.hpp"
#include "photonef/propagator.hpp"

namespace photonef {

struct TimeSeries {
  std::string name;
  std::vector<double> times, values;
};

// |<Psi(0)|Psi(t)>|^2 over the stored frames
TimeSeries autocorr_psi(const Trajectory& traj);
double overlap_abs2(const SpinorField& a, const SpinorField& b);

// |sum_M Phi^dag(0) Phi(t) dV|^2 / (sum_M dV)^2
double autocorr_phi(const Factorization& f0, const Factorization& ft);

// w_a <q_a> per mode
std::vector<double> electric_field(const SpinorField& psi, const ModelParams& params);

struct Populations {
  double excited = 0.0;
  std::vector<double> photons;  // per mode
};

// photon number <1/2 (p^2/w + w q^2) - 1/2> with spectral p^2
Populations populations_and_photons(const SpinorField& psi, const ModelParams& params);

struct BoProfiles {
  Eigen::ArrayXd upper_abs2, lower_abs2;
  Mask mask;
};

BoProfiles bo_coefficient_profiles(const Factorization& f, const QboSurfaces& surfaces);

}  // namespace photonef
