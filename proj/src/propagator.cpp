#include "photonef/propagator.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "photonef/errors.hpp"
#include "photonef/fft.hpp"

namespace photonef {

using cd = std::complex<double>;

Method parse_method(const std::string& s) {
  if (s == "split_operator") return Method::split_operator;
  if (s == "crank_nicolson") return Method::crank_nicolson;
  throw ConfigError("unknown propagation method '" + s + "'");
}

std::string to_string(Method m) {
  return m == Method::split_operator ? "split_operator" : "crank_nicolson";
}

void PropagatorConfig::validate(const ModelParams& params) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (save_stride == 0) throw ConfigError("save_stride must be >= 1");
  double wmax = params.omega0;
  for (double w : params.mode_freqs) wmax = std::max(wmax, w);
  if (dt * wmax >= 0.5) {
    std::ostringstream os;
    os << "dt * max(omega) = " << dt * wmax << " violates the stability guard (< 0.5)";
    throw ConfigError(os.str());
  }
}

namespace {

// exp(-i tau (s + a sz + c sx)) as a symmetric 2x2 per point
struct PotentialStep {
  Eigen::ArrayXcd u00, u01, u11;

  PotentialStep(const Eigen::ArrayXd& s, double a, const Eigen::ArrayXd& c, double tau) {
    const Eigen::Index n = s.size();
    u00.resize(n);
    u01.resize(n);
    u11.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double r = std::sqrt(a * a + c[k] * c[k]);
      const double co = std::cos(r * tau), si = std::sin(r * tau) / r;
      const cd e = std::exp(cd(0.0, -s[k] * tau));
      u00[k] = e * cd(co, -si * a);
      u11[k] = e * cd(co, si * a);
      u01[k] = e * cd(0.0, -si * c[k]);
    }
  }

  void apply(Eigen::Matrix2Xcd& v) const {
    for (Eigen::Index k = 0; k < v.cols(); ++k) {
      const cd p = v(0, k), q = v(1, k);
      v(0, k) = u00[k] * p + u01[k] * q;
      v(1, k) = u01[k] * p + u11[k] * q;
    }
  }
};

}  // namespace

struct Propagator::Impl {
  double dt;
  Method method;

  // split operator
  std::unique_ptr<SpinorFft> fft;
  Eigen::ArrayXcd kinetic;
  std::unique_ptr<PotentialStep> half, full;

  // Crank-Nicolson
  Eigen::SparseMatrix<cd> rhs;
  Eigen::SparseLU<Eigen::SparseMatrix<cd>> lu;

  Impl(const ModelParams& params, const QGrid& grid, Method m, double dt_) : dt(dt_), method(m) {
    const Eigen::ArrayXd s = harmonic_potential(params, grid);
    const Eigen::ArrayXd c = coupling_field(params, grid);
    const double a = 0.5 * params.omega0;
    if (m == Method::split_operator) {
      fft = std::make_unique<SpinorFft>(grid);
      const Eigen::ArrayXd k2 = fft->k_squared();
      kinetic.resize(k2.size());
      for (Eigen::Index k = 0; k < k2.size(); ++k) kinetic[k] = std::exp(cd(0.0, -0.5 * k2[k] * dt));
      half = std::make_unique<PotentialStep>(s, a, c, 0.5 * dt);
      full = std::make_unique<PotentialStep>(s, a, c, dt);
    } else {
      build_cn(grid, s, a, c);
    }
  }

  void build_cn(const QGrid& grid, const Eigen::ArrayXd& s, double a, const Eigen::ArrayXd& c) {
    const Eigen::Index n = Eigen::Index(grid.size());
    std::vector<Eigen::Triplet<cd>> h;
    // 4th-order Laplacian, zero outside the box
    static const double w[5] = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};
    for (Eigen::Index k = 0; k < n; ++k) {
      h.emplace_back(2 * k, 2 * k, s[k] + a);
      h.emplace_back(2 * k + 1, 2 * k + 1, s[k] - a);
      h.emplace_back(2 * k, 2 * k + 1, c[k]);
      h.emplace_back(2 * k + 1, 2 * k, c[k]);
      for (std::size_t d = 0; d < grid.dims(); ++d) {
        const double hh = grid.axis(d).spacing();
        const long i = long(grid.index(std::size_t(k), d));
        const long nd = long(grid.axis(d).n_points);
        const long st = long(grid.stride(d));
        for (int o = -2; o <= 2; ++o) {
          if (i + o < 0 || i + o >= nd) continue;
          const double v = -0.5 * w[o + 2] / (hh * hh);
          const Eigen::Index j = k + o * st;
          h.emplace_back(2 * k, 2 * j, v);
          h.emplace_back(2 * k + 1, 2 * j + 1, v);
        }
      }
    }
    Eigen::SparseMatrix<cd> H(2 * n, 2 * n);
    H.setFromTriplets(h.begin(), h.end());
    Eigen::SparseMatrix<cd> I(2 * n, 2 * n);
    I.setIdentity();
    const cd f(0.0, 0.5 * dt);
    Eigen::SparseMatrix<cd> lhs = I + f * H;
    rhs = I - f * H;
    lhs.makeCompressed();
    lu.compute(lhs);
    if (lu.info() != Eigen::Success) throw InvariantViolation("Crank-Nicolson factorisation failed");
  }

  void advance(Eigen::Matrix2Xcd& v, std::size_t steps) {
    if (steps == 0) return;
    if (method == Method::split_operator) {
      // consecutive half potential steps fuse into full ones
      half->apply(v);
      for (std::size_t i = 0; i < steps; ++i) {
        fft->forward(v);
        for (Eigen::Index k = 0; k < v.cols(); ++k) v.col(k) *= kinetic[k];
        fft->backward(v);
        (i + 1 == steps ? half : full)->apply(v);
      }
    } else {
      Eigen::Map<Eigen::VectorXcd> x(v.data(), v.size());
      Eigen::VectorXcd y;
      for (std::size_t i = 0; i < steps; ++i) {
        y = rhs * x;
        x = lu.solve(y);
      }
    }
  }
};

Propagator::Propagator(const ModelParams& params, const QGrid& grid, Method method, double dt)
    : impl_(std::make_unique<Impl>(params, grid, method, dt)) {}
Propagator::~Propagator() = default;
Propagator::Propagator(Propagator&&) noexcept = default;
Propagator& Propagator::operator=(Propagator&&) noexcept = default;

void Propagator::advance(SpinorField& state, std::size_t steps) {
  impl_->advance(state.values, steps);
  state.time += double(steps) * impl_->dt;
}

double Propagator::dt() const { return impl_->dt; }

double edge_density(const SpinorField& state) {
  const QGrid& g = state.grid;
  const Eigen::ArrayXd rho = state.density();
  double m = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    bool edge = false;
    for (std::size_t d = 0; d < g.dims(); ++d) {
      const std::size_t i = g.index(k, d);
      edge = edge || i == 0 || i + 1 == g.axis(d).n_points;
    }
    if (edge) m = std::max(m, rho[Eigen::Index(k)]);
  }
  return m;
}

void check_frame(const SpinorField& state) {
  const double n = state.norm();
  if (!(std::abs(n - 1.0) <= kNormTolerance)) {
    std::ostringstream os;
    os << "norm drift " << n - 1.0 << " at t = " << state.time;
    throw InvariantViolation(os.str());
  }
  const double e = edge_density(state);
  if (e > kEdgeTolerance) {
    std::ostringstream os;
    os << "density " << e << " reached the grid edge at t = " << state.time;
    throw InvariantViolation(os.str());
  }
}

Trajectory propagate(const SpinorField& initial, const ModelParams& params, const PropagatorConfig& cfg) {
  cfg.validate(params);
  Trajectory traj;
  traj.config = cfg;
  Propagator prop(params, initial.grid, cfg.method, cfg.dt);
  SpinorField state = initial;
  check_frame(state);
  traj.frames.push_back(state);
  std::size_t done = 0;
  while (done < cfg.n_steps) {
    const std::size_t n = std::min(cfg.save_stride, cfg.n_steps - done);
    prop.advance(state, n);
    done += n;
    state.time = double(done) * cfg.dt + initial.time;
    check_frame(state);
    traj.frames.push_back(state);
  }
  return traj;
}

double energy_expectation(const SpinorField& state, const ModelParams& params) {
  const QGrid& g = state.grid;
  SpinorFft fft(g);
  Eigen::Matrix2Xcd hat = state.values;
  fft.forward(hat);
  const Eigen::ArrayXd k2 = fft.k_squared();
  const Eigen::ArrayXd p = hat.colwise().squaredNorm().transpose().array();
  const double kinetic = 0.5 * (p * k2).sum() / double(g.size());

  const Eigen::ArrayXd s = harmonic_potential(params, g);
  const Eigen::ArrayXd c = coupling_field(params, g);
  const double a = 0.5 * params.omega0;
  double pot = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    const cd p0 = state.values(0, k), p1 = state.values(1, k);
    pot += (s[k] + a) * std::norm(p0) + (s[k] - a) * std::norm(p1) + 2.0 * c[k] * std::real(std::conj(p0) * p1);
  }
  return (kinetic + pot) * g.cell_volume();
}

}  // namespace photonef
