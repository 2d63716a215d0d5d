#include "photonef/fock_oracle.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "photonef/errors.hpp"

namespace photonef {

using cd = std::complex<double>;

Eigen::MatrixXd hermite_functions(const Eigen::ArrayXd& q, double w, std::size_t n_max) {
  Eigen::MatrixXd h(n_max + 1, q.size());
  const Eigen::ArrayXd xi = std::sqrt(w) * q;
  h.row(0) = (std::pow(w / M_PI, 0.25) * (-0.5 * xi.square()).exp()).matrix().transpose();
  if (n_max >= 1) h.row(1) = (std::sqrt(2.0) * xi * h.row(0).transpose().array()).matrix().transpose();
  for (std::size_t n = 1; n < n_max; ++n) {
    const double a = std::sqrt(2.0 / double(n + 1)), b = std::sqrt(double(n) / double(n + 1));
    h.row(n + 1) = (a * xi * h.row(n).transpose().array() - b * h.row(n - 1).transpose().array())
                       .matrix()
                       .transpose();
  }
  return h;
}

FockBasis::FockBasis(const ModelParams& params, std::size_t n_max) : params_(params), n_max_(n_max) {
  params_.validate();
  if (n_max < 10) throw ConfigError("Fock cutoff n_max must be >= 10");
  n_photon_ = 1;
  for (std::size_t a = 0; a < params.n_modes(); ++a) n_photon_ *= n_max + 1;
}

std::size_t FockBasis::occupation(std::size_t p, std::size_t a) const {
  const std::size_t m = params_.n_modes();
  for (std::size_t b = m - 1; b > a; --b) p /= n_max_ + 1;
  return p % (n_max_ + 1);
}

Eigen::MatrixXd FockBasis::hamiltonian() const {
  const std::size_t m = params_.n_modes();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(Eigen::Index(dim()), Eigen::Index(dim()));
  for (std::size_t p = 0; p < n_photon_; ++p) {
    double e = 0.0;
    for (std::size_t a = 0; a < m; ++a) e += params_.mode_freqs[a] * (double(occupation(p, a)) + 0.5);
    H(Eigen::Index(p), Eigen::Index(p)) = e + 0.5 * params_.omega0;
    H(Eigen::Index(n_photon_ + p), Eigen::Index(n_photon_ + p)) = e - 0.5 * params_.omega0;
    std::size_t step = 1;
    for (std::size_t b = m; b-- > 0;) {
      const std::size_t n = occupation(p, b);
      if (n < n_max_) {
        const double w = params_.mode_freqs[b];
        // w dl <n+1|q|n>, q = (a + a^dag)/sqrt(2w)
        const double v = w * params_.couplings[b] * std::sqrt(double(n + 1) / (2.0 * w));
        const Eigen::Index up = Eigen::Index(p + step);
        H(Eigen::Index(p), Eigen::Index(n_photon_) + up) = v;
        H(Eigen::Index(n_photon_) + up, Eigen::Index(p)) = v;
        H(up, Eigen::Index(n_photon_ + p)) = v;
        H(Eigen::Index(n_photon_ + p), up) = v;
      }
      step *= n_max_ + 1;
    }
  }
  return H;
}

double FockBasis::top_population(const Eigen::VectorXcd& c) const {
  double pop = 0.0;
  for (std::size_t p = 0; p < n_photon_; ++p) {
    bool top = false;
    for (std::size_t a = 0; a < params_.n_modes(); ++a) top = top || occupation(p, a) + 1 >= n_max_;
    if (top) pop += std::norm(c[Eigen::Index(p)]) + std::norm(c[Eigen::Index(n_photon_ + p)]);
  }
  return pop;
}

Eigen::MatrixXd FockBasis::basis_on_grid(const QGrid& grid) const {
  if (grid.dims() != params_.n_modes()) throw ConfigError("grid dimension does not match mode count");
  std::vector<Eigen::MatrixXd> h;
  for (std::size_t a = 0; a < params_.n_modes(); ++a)
    h.push_back(hermite_functions(grid.coordinates(a), params_.mode_freqs[a], n_max_));
  Eigen::MatrixXd b = Eigen::MatrixXd::Ones(Eigen::Index(n_photon_), Eigen::Index(grid.size()));
  for (std::size_t p = 0; p < n_photon_; ++p)
    for (std::size_t a = 0; a < params_.n_modes(); ++a)
      b.row(Eigen::Index(p)).array() *= h[a].row(Eigen::Index(occupation(p, a))).array();
  return b;
}

Eigen::VectorXcd FockBasis::project(const SpinorField& psi) const {
  const Eigen::MatrixXd b = basis_on_grid(psi.grid);
  const double dv = psi.grid.cell_volume();
  Eigen::VectorXcd c(static_cast<Eigen::Index>(dim()));
  c.head(Eigen::Index(n_photon_)) = b.cast<cd>() * psi.values.row(0).transpose() * dv;
  c.tail(Eigen::Index(n_photon_)) = b.cast<cd>() * psi.values.row(1).transpose() * dv;
  return c;
}

SpinorField FockBasis::to_grid(const Eigen::VectorXcd& c, const QGrid& grid, double time) const {
  const Eigen::MatrixXd b = basis_on_grid(grid);
  SpinorField psi(grid, time);
  psi.values.row(0) = (b.transpose().cast<cd>() * c.head(Eigen::Index(n_photon_))).transpose();
  psi.values.row(1) = (b.transpose().cast<cd>() * c.tail(Eigen::Index(n_photon_))).transpose();
  return psi;
}

std::vector<double> FockBasis::photon_numbers(const Eigen::VectorXcd& c) const {
  std::vector<double> n(params_.n_modes(), 0.0);
  for (std::size_t p = 0; p < n_photon_; ++p) {
    const double w = std::norm(c[Eigen::Index(p)]) + std::norm(c[Eigen::Index(n_photon_ + p)]);
    for (std::size_t a = 0; a < n.size(); ++a) n[a] += w * double(occupation(p, a));
  }
  return n;
}

namespace {
void check_cutoff(const FockBasis& basis, const Eigen::VectorXcd& c, double t) {
  const double top = basis.top_population(c);
  const double lost = std::abs(1.0 - c.squaredNorm());
  if (top > kCutoffTolerance || lost > kCutoffTolerance) {
    std::ostringstream os;
    os << "Fock cutoff n_max = " << basis.n_max() << " too small at t = " << t << " (top levels hold "
       << top << ", outside basis " << lost << ")";
    throw CutoffError(os.str());
  }
}
}  // namespace

Trajectory fock_oracle_propagate(const SpinorField& initial, const ModelParams& params,
                                 const PropagatorConfig& cfg, std::size_t n_max) {
  cfg.validate(params);
  FockBasis basis(params, n_max);
  const Eigen::VectorXcd c0 = basis.project(initial);
  check_cutoff(basis, c0, initial.time);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(basis.hamiltonian());
  const Eigen::MatrixXcd V = es.eigenvectors().cast<cd>();
  const Eigen::VectorXcd d0 = V.adjoint() * c0;

  Trajectory traj;
  traj.config = cfg;
  std::size_t done = 0;
  while (true) {
    const double t = double(done) * cfg.dt;
    Eigen::VectorXcd d(d0.size());
    for (Eigen::Index k = 0; k < d.size(); ++k) d[k] = d0[k] * std::exp(cd(0.0, -es.eigenvalues()[k] * t));
    const Eigen::VectorXcd c = V * d;
    check_cutoff(basis, c, t);
    traj.frames.push_back(basis.to_grid(c, initial.grid, initial.time + t));
    if (done >= cfg.n_steps) break;
    done += std::min(cfg.save_stride, cfg.n_steps - done);
  }
  return traj;
}

}  // namespace photonef
