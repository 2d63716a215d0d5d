#include "photonef/model.hpp"

#include <cmath>

#include "photonef/errors.hpp"

namespace photonef {

void ModelParams::validate() const {
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw ConfigError("omega0 must be positive");
  if (mode_freqs.empty() || mode_freqs.size() > 2)
    throw ConfigError("grid pathway supports 1 or 2 modes");
  if (couplings.size() != mode_freqs.size())
    throw ConfigError("couplings and mode_freqs must have the same length");
  for (double w : mode_freqs)
    if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("mode frequencies must be positive");
  for (double c : couplings)
    if (!std::isfinite(c)) throw ConfigError("couplings must be finite");
}

ModelParams ModelParams::single_mode(double omega0, double coupling) {
  ModelParams p;
  p.omega0 = omega0;
  p.mode_freqs = {omega0};
  p.couplings = {coupling};
  return p;
}

void SpinorField::normalize() {
  const double n = norm();
  if (!(n > 0.0)) throw InvariantViolation("cannot normalise a zero spinor field");
  values /= std::sqrt(n);
}

static void check_dims(const ModelParams& params, const QGrid& grid) {
  params.validate();
  if (params.n_modes() != grid.dims())
    throw ConfigError("number of modes (" + std::to_string(params.n_modes()) +
                      ") does not match grid dimension (" + std::to_string(grid.dims()) + ")");
}

Eigen::ArrayXd coupling_field(const ModelParams& params, const QGrid& grid) {
  check_dims(params, grid);
  Eigen::ArrayXd c = Eigen::ArrayXd::Zero(grid.size());
  for (std::size_t a = 0; a < params.n_modes(); ++a)
    c += params.mode_freqs[a] * params.couplings[a] * grid.coordinates(a);
  return c;
}

Eigen::ArrayXd harmonic_potential(const ModelParams& params, const QGrid& grid) {
  check_dims(params, grid);
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(grid.size());
  for (std::size_t a = 0; a < params.n_modes(); ++a) {
    const double w = params.mode_freqs[a];
    v += 0.5 * w * w * grid.coordinates(a).square();
  }
  return v;
}

QboSurfaces qbo_surfaces(const ModelParams& params, const QGrid& grid) {
  const Eigen::ArrayXd c = coupling_field(params, grid);
  const Eigen::ArrayXd s = harmonic_potential(params, grid);
  const double half = 0.5 * params.omega0;
  const Eigen::ArrayXd r = (half * half + c.square()).sqrt();

  QboSurfaces out;
  out.lower = s - r;
  out.upper = s + r;
  out.vec_lower.resize(2, grid.size());
  out.vec_upper.resize(2, grid.size());
  // half-angle form: smooth in q since w0/2 > 0
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    const double th = 0.5 * std::atan2(c[k], half);
    const double ch = std::cos(th), sh = std::sin(th);
    out.vec_upper(0, k) = ch;
    out.vec_upper(1, k) = sh;
    out.vec_lower(0, k) = -sh;
    out.vec_lower(1, k) = ch;
  }
  return out;
}

InitialState parse_initial_state(const std::string& s) {
  if (s == "qbo_excited") return InitialState::qbo_excited;
  if (s == "factorized_excited") return InitialState::factorized_excited;
  throw ConfigError("unknown initial state '" + s + "'");
}

std::string to_string(InitialState s) {
  return s == InitialState::qbo_excited ? "qbo_excited" : "factorized_excited";
}

Eigen::ArrayXd vacuum_amplitude(const ModelParams& params, const QGrid& grid) {
  check_dims(params, grid);
  Eigen::ArrayXd g = Eigen::ArrayXd::Ones(grid.size());
  for (std::size_t a = 0; a < params.n_modes(); ++a) {
    const double w = params.mode_freqs[a];
    g *= std::pow(w / M_PI, 0.25) * (-0.5 * w * grid.coordinates(a).square()).exp();
  }
  return g;
}

SpinorField build_initial_state(InitialState kind, const ModelParams& params, const QGrid& grid) {
  const Eigen::ArrayXd chi0 = vacuum_amplitude(params, grid);
  SpinorField psi(grid, 0.0);
  if (kind == InitialState::factorized_excited) {
    psi.values.row(0) = chi0.matrix().transpose().cast<std::complex<double>>();
  } else {
    const QboSurfaces s = qbo_surfaces(params, grid);
    for (Eigen::Index k = 0; k < chi0.size(); ++k) {
      psi.values(0, k) = chi0[k] * s.vec_upper(0, k);
      psi.values(1, k) = chi0[k] * s.vec_upper(1, k);
    }
  }
  psi.normalize();
  return psi;
}

}  // namespace photonef
