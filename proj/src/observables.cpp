#include "photonef/observables.hpp"

#include <cmath>

#include "photonef/errors.hpp"
#include "photonef/fft.hpp"

namespace photonef {

using cd = std::complex<double>;

double overlap_abs2(const SpinorField& a, const SpinorField& b) {
  if (a.grid != b.grid) throw ConfigError("overlap needs fields on the same grid");
  cd s = 0.0;
  for (Eigen::Index k = 0; k < a.values.cols(); ++k) s += a.values.col(k).dot(b.values.col(k));
  return std::norm(s * a.grid.cell_volume());
}

TimeSeries autocorr_psi(const Trajectory& traj) {
  TimeSeries ts;
  ts.name = "A_psi";
  if (traj.frames.empty()) return ts;
  for (const auto& f : traj.frames) {
    ts.times.push_back(f.time);
    ts.values.push_back(overlap_abs2(traj.frames.front(), f));
  }
  return ts;
}

double autocorr_phi(const Factorization& f0, const Factorization& ft) {
  if (f0.grid != ft.grid) throw ConfigError("autocorrelation needs frames on the same grid");
  cd acc = 0.0;
  double count = 0.0;
  for (Eigen::Index k = 0; k < f0.phi.cols(); ++k) {
    if (!(f0.mask[k] && ft.mask[k])) continue;
    acc += f0.phi.col(k).dot(ft.phi.col(k));
    count += 1.0;
  }
  if (count == 0.0) return 0.0;
  return std::min(1.0, std::norm(acc / count));
}

std::vector<double> electric_field(const SpinorField& psi, const ModelParams& params) {
  const Eigen::ArrayXd rho = psi.density();
  std::vector<double> e;
  for (std::size_t a = 0; a < params.n_modes(); ++a)
    e.push_back(params.mode_freqs[a] * (rho * psi.grid.coordinates(a)).sum() * psi.grid.cell_volume());
  return e;
}

Populations populations_and_photons(const SpinorField& psi, const ModelParams& params) {
  const QGrid& g = psi.grid;
  const double dv = g.cell_volume();
  Populations out;
  out.excited = psi.values.row(0).squaredNorm() * dv;
  SpinorFft fft(g);
  Eigen::Matrix2Xcd hat = psi.values;
  fft.forward(hat);
  const Eigen::ArrayXd p2 = hat.colwise().squaredNorm().transpose().array();
  const Eigen::ArrayXd rho = psi.density();
  for (std::size_t a = 0; a < params.n_modes(); ++a) {
    const double w = params.mode_freqs[a];
    const double kin = (p2 * fft.wavenumbers(a).square()).sum() / double(g.size()) * dv;
    const double pot = (rho * g.coordinates(a).square()).sum() * dv;
    out.photons.push_back(0.5 * (kin / w + w * pot) - 0.5);
  }
  return out;
}

BoProfiles bo_coefficient_profiles(const Factorization& f, const QboSurfaces& surfaces) {
  const Eigen::Index n = f.phi.cols();
  BoProfiles b;
  b.upper_abs2.resize(n);
  b.lower_abs2.resize(n);
  b.mask = f.mask;
  for (Eigen::Index k = 0; k < n; ++k) {
    b.upper_abs2[k] = std::norm(surfaces.vec_upper.col(k).cast<cd>().dot(f.phi.col(k)));
    b.lower_abs2[k] = std::norm(surfaces.vec_lower.col(k).cast<cd>().dot(f.phi.col(k)));
  }
  return b;
}

}  // namespace photonef
