#include "photonef/ww.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "photonef/errors.hpp"

namespace photonef {

using cd = std::complex<double>;
static const cd I(0.0, 1.0);

WWModeSet::WWModeSet(double omega0_, double coupling_, double box_length_, double light_speed_,
                     std::size_t first_index_, std::size_t n_modes_)
    : omega0(omega0_),
      coupling(coupling_),
      box_length(box_length_),
      light_speed(light_speed_),
      first_index(first_index_),
      n_modes(n_modes_) {
  if (!(omega0 > 0.0)) throw ConfigError("omega0 must be positive");
  if (!(box_length > 0.0) || !(light_speed > 0.0)) throw ConfigError("box length and light speed must be positive");
  if (n_modes == 0 || first_index == 0) throw ConfigError("mode set needs n_modes >= 1 and first index >= 1");
  freqs.resize(Eigen::Index(n_modes));
  g.resize(Eigen::Index(n_modes));
  for (std::size_t a = 0; a < n_modes; ++a) {
    freqs[Eigen::Index(a)] = double(first_index + a) * spacing();
    g[Eigen::Index(a)] = std::sqrt(M_PI * freqs[Eigen::Index(a)] / 2.0) * coupling;
  }
}

double WWModeSet::spacing() const { return M_PI * light_speed / box_length; }

double WWModeSet::gamma() const {
  return coupling * coupling * omega0 * omega0 * box_length / std::pow(light_speed, 3);
}

double WWModeSet::lamb_shift() const {
  const double dw = spacing();
  const double lo = freqs[0] - 0.5 * dw, hi = freqs[freqs.size() - 1] + 0.5 * dw;
  const double pv = -(hi - lo) + omega0 * std::log(std::abs(omega0 - lo) / std::abs(hi - omega0));
  return M_PI * coupling * coupling / (2.0 * dw) * pv;
}

std::size_t WWModeSet::index_of(double w) const {
  const double x = w / spacing() - double(first_index);
  const long k = std::lround(x);
  if (k < 0 || k >= long(n_modes) || std::abs(x - double(k)) > 1e-6) {
    std::ostringstream os;
    os << "no mode at frequency " << w;
    throw ConfigError(os.str());
  }
  return std::size_t(k);
}

WWModeSet WWModeSet::with_spacing(double omega0, double coupling, double anchor, double dw, double band) {
  if (!(dw > 0.0)) throw ConfigError("mode spacing must be positive");
  if (!(anchor > 0.0)) throw ConfigError("anchor frequency must be positive");
  const double m = anchor / dw;
  if (std::abs(m - std::round(m)) > 1e-9 * m) throw ConfigError("anchor frequency is not on the mode lattice");
  // c^2 = w0/pi makes the golden-rule rate equal gamma()
  const double c = std::sqrt(omega0 / M_PI);
  const double V = M_PI * c / dw;
  const double gam = M_PI * M_PI * omega0 * coupling * coupling / dw;
  const long am = std::lround(m);
  long first = std::max(1L, long(std::ceil((omega0 - band * gam) / dw - 1e-9)));
  long last = long(std::floor((omega0 + band * gam) / dw + 1e-9));
  first = std::min(first, am);
  last = std::max(last, am);
  return WWModeSet(omega0, coupling, V, c, std::size_t(first), std::size_t(last - first + 1));
}

WWModeSet WWModeSet::quasi_continuum(double omega0, double coupling, double anchor, double ratio, double band) {
  if (coupling == 0.0) throw ConfigError("quasi-continuum mode set needs a nonzero coupling");
  if (!(ratio > 0.0)) throw ConfigError("spacing ratio must be positive");
  // spacing * gamma = pi^2 w0 dl^2 is fixed, so spacing <= gamma/ratio bounds the spacing
  const double dw_max = M_PI * std::abs(coupling) * std::sqrt(omega0 / ratio);
  const double m = std::ceil(anchor / dw_max - 1e-12);
  return with_spacing(omega0, coupling, anchor, anchor / m, band);
}

WWCoefficients ww_closed_form(const WWModeSet& modes, double t) {
  const double w0 = modes.omega0, gam = modes.gamma();
  WWCoefficients c;
  c.time = t;
  c.a = std::exp(cd(-0.5 * gam * t, -w0 * t));
  c.a_dot = cd(-0.5 * gam, -w0) * c.a;
  const Eigen::Index n = modes.freqs.size();
  c.b.resize(n);
  c.b_dot.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double w = modes.freqs[k], d = w - w0;
    const cd den(-0.5 * gam, d);
    const cd E = std::exp(cd(-0.5 * gam * t, d * t));
    const cd rot = std::exp(cd(0.0, -w * t));
    const cd beta = std::abs(den) < 1e-300 ? I * modes.g[k] * t : I * modes.g[k] * (E - 1.0) / den;
    c.b[k] = rot * beta;
    c.b_dot[k] = -I * w * c.b[k] + rot * I * modes.g[k] * E;
  }
  c.truncation_deficit = 1.0 - std::norm(c.a) - c.b.abs2().sum();
  return c;
}

std::vector<WWCoefficients> ww_ode_integrate(const WWModeSet& modes, const std::vector<double>& t_grid) {
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    if (!(t_grid[k] >= 0.0) || (k > 0 && t_grid[k] < t_grid[k - 1]))
      throw ConfigError("t_grid must be non-negative and increasing");
  }
  const Eigen::Index n = modes.freqs.size();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n + 1, n + 1);
  H(0, 0) = modes.omega0 - modes.lamb_shift();
  H.block(1, 1, n, n).diagonal() = modes.freqs.matrix();
  H.block(1, 0, n, 1) = modes.g.matrix();
  H.block(0, 1, 1, n) = modes.g.matrix().transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  const Eigen::MatrixXd& V = es.eigenvectors();
  const Eigen::VectorXd& lam = es.eigenvalues();

  std::vector<WWCoefficients> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    Eigen::VectorXcd d(n + 1);
    for (Eigen::Index k = 0; k <= n; ++k) d[k] = V(0, k) * std::exp(cd(0.0, -lam[k] * t));
    const Eigen::VectorXcd x = V.cast<cd>() * d;
    const Eigen::VectorXcd xd = -I * (H.cast<cd>() * x);
    const double drift = x.squaredNorm() - 1.0;
    if (std::abs(drift) > 1e-8) {
      std::ostringstream os;
      os << "single-excitation norm drifted by " << drift << " at t = " << t;
      throw InvariantViolation(os.str());
    }
    WWCoefficients c;
    c.time = t;
    c.a = x[0];
    c.a_dot = xd[0];
    c.b = x.tail(n).array();
    c.b_dot = xd.tail(n).array();
    c.truncation_deficit = -drift;
    out.push_back(std::move(c));
  }
  return out;
}

CrossSection cross_section_state(const WWCoefficients& c, const WWModeSet& modes, std::size_t i, const QGrid& grid) {
  if (i >= modes.n_modes) throw ConfigError("cross-section mode index out of range");
  if (grid.dims() != 1) throw ConfigError("cross-sections live on a 1-D grid");
  const Eigen::Index ii = Eigen::Index(i);
  const double wi = modes.freqs[ii], s = std::sqrt(2.0 * wi);
  const cd a = c.a, b = c.b[ii];
  const double a2 = std::norm(a), b2 = std::norm(b);

  CrossSection cs;
  cs.mode = i;
  cs.omega_i = wi;
  cs.time = c.time;
  cs.grid = grid;
  cs.log_transverse_constant = 0.0;
  for (Eigen::Index j = 0; j < modes.freqs.size(); ++j)
    if (j != ii) cs.log_transverse_constant += 0.25 * std::log(modes.freqs[j] / M_PI);

  // transverse sums over j != i
  double t_abs = 0.0;
  Eigen::ArrayXd sj2 = 2.0 * modes.freqs;
  for (Eigen::Index j = 0; j < sj2.size(); ++j)
    if (j != ii) t_abs += sj2[j] * std::norm(c.b[j]);

  const Eigen::Index n = Eigen::Index(grid.size());
  const Eigen::ArrayXd q = grid.coordinates(0);
  cs.psi.resize(2, n);
  cs.phi.resize(2, n);
  cs.dphi.resize(2, n);
  cs.d2phi.resize(2, n);
  cs.dphi_dt.resize(2, n);
  cs.chi_abs.resize(n);
  cs.transverse_kinetic.resize(n);
  cs.mask.resize(n);
  const double nan = std::nan("");
  const double norm_g = std::pow(wi / M_PI, 0.25);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double x = q[k];
    const double G = norm_g * std::exp(-0.5 * wi * x * x);
    const Eigen::Vector2cd u(a, b * s * x);
    const double rho = a2 + b2 * s * s * x * x;
    const double nn = std::sqrt(rho);
    cs.psi.col(k) = G * u;
    cs.chi_abs[k] = G * nn;
    cs.mask[k] = cs.chi_abs[k] * cs.chi_abs[k] >= 1e-12;
    if (!(nn > 0.0)) {
      cs.phi.col(k).setConstant(nan);
      cs.dphi.col(k).setConstant(nan);
      cs.d2phi.col(k).setConstant(nan);
      cs.dphi_dt.col(k).setConstant(nan);
      cs.transverse_kinetic[k] = nan;
      continue;
    }
    const Eigen::Vector2cd du(0.0, b * s);
    const double n1 = b2 * s * s * x / nn;
    const double n2 = (b2 * s * s - n1 * n1) / nn;
    cs.phi.col(k) = u / nn;
    cs.dphi.col(k) = du / nn - u * (n1 / rho);
    cs.d2phi.col(k) = -du * (2.0 * n1 / rho) - u * (n2 / rho) + u * (2.0 * n1 * n1 / (rho * nn));

    const Eigen::Vector2cd udot(c.a_dot, c.b_dot[ii] * s * x);
    const double rdot = 2.0 * std::real(std::conj(a) * c.a_dot) + 2.0 * std::real(std::conj(b) * c.b_dot[ii]) * s * s * x * x;
    const double ndot = rdot / (2.0 * nn);
    cs.dphi_dt.col(k) = udot / nn - u * (ndot / rho);

    // sum_j |d_j Phi|^2 - A_j^2 at q_j = 0
    cs.transverse_kinetic[k] = a2 * t_abs / (rho * rho);
  }
  return cs;
}

double autocorr_phi(const CrossSection& c0, const CrossSection& ct) {
  if (c0.grid != ct.grid) throw ConfigError("autocorrelation needs cross-sections on the same grid");
  cd acc = 0.0;
  double count = 0.0;
  for (Eigen::Index k = 0; k < c0.phi.cols(); ++k) {
    if (!(c0.mask[k] && ct.mask[k])) continue;
    acc += c0.phi.col(k).dot(ct.phi.col(k));
    count += 1.0;
  }
  if (count == 0.0) return 0.0;
  return std::min(1.0, std::norm(acc / count));
}

}  // namespace photonef
