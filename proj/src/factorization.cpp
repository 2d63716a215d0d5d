#include "photonef/factorization.hpp"

#include <cmath>
#include <sstream>

#include "photonef/errors.hpp"
#include "photonef/fft.hpp"
#include "photonef/numerics.hpp"

namespace photonef {

using cd = std::complex<double>;

namespace {

const double kNan = std::nan("");

std::size_t argmax_density(const Eigen::ArrayXd& rho) {
  Eigen::Index k = 0;
  rho.maxCoeff(&k);
  return std::size_t(k);
}

// discrete parallel transport along one grid line through `start`
void transport_line(const Eigen::Matrix2Xcd& v, Eigen::ArrayXd& S, std::size_t start, std::size_t stride,
                    std::size_t pos, std::size_t n) {
  for (std::size_t i = pos; i + 1 < n; ++i) {
    const std::size_t k = start + (i - pos) * stride;
    S[Eigen::Index(k + stride)] = S[Eigen::Index(k)] + std::arg(v.col(Eigen::Index(k)).dot(v.col(Eigen::Index(k + stride))));
  }
  for (std::size_t i = pos; i > 0; --i) {
    const std::size_t k = start - (pos - i) * stride;
    S[Eigen::Index(k - stride)] = S[Eigen::Index(k)] + std::arg(v.col(Eigen::Index(k)).dot(v.col(Eigen::Index(k - stride))));
  }
}

Eigen::ArrayXd transport(const SpinorField& psi, std::size_t anchor, std::size_t first_axis) {
  const QGrid& g = psi.grid;
  Eigen::ArrayXd S = Eigen::ArrayXd::Zero(Eigen::Index(g.size()));
  if (g.dims() == 1) {
    transport_line(psi.values, S, anchor, 1, anchor, g.size());
    return S;
  }
  const std::size_t d0 = first_axis, d1 = 1 - first_axis;
  transport_line(psi.values, S, anchor, g.stride(d0), g.index(anchor, d0), g.axis(d0).n_points);
  const std::size_t p1 = g.index(anchor, d1);
  for (std::size_t i = 0; i < g.axis(d0).n_points; ++i) {
    const std::size_t k = anchor + (i - g.index(anchor, d0)) * g.stride(d0);
    transport_line(psi.values, S, k, g.stride(d1), p1, g.axis(d1).n_points);
  }
  return S;
}

Mask make_mask(const Eigen::ArrayXd& rho) { return rho >= kMaskThreshold; }

double max_on(const Eigen::ArrayXd& x, const Mask& m) {
  double r = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k)
    if (m[k]) r = std::max(r, std::abs(x[k]));
  return r;
}

}  // namespace

Eigen::ArrayXd gauge_phase(const SpinorField& psi, double& path_mismatch) {
  const Eigen::ArrayXd rho = psi.density();
  const std::size_t anchor = argmax_density(rho);
  Eigen::ArrayXd S = transport(psi, anchor, 0);
  path_mismatch = 0.0;
  if (psi.grid.dims() == 2) {
    const Eigen::ArrayXd other = transport(psi, anchor, 1);
    const Mask m = make_mask(rho);
    for (Eigen::Index k = 0; k < S.size(); ++k)
      if (m[k]) path_mismatch = std::max(path_mismatch, std::abs(wrap_phase(S[k] - other[k])));
  }
  return S;
}

Eigen::ArrayXd gauge_phase(const SpinorField& psi) {
  double unused = 0.0;
  return gauge_phase(psi, unused);
}

Eigen::Matrix2Xcd Factorization::reconstruct() const {
  Eigen::Matrix2Xcd out(2, phi.cols());
  for (Eigen::Index k = 0; k < phi.cols(); ++k) out.col(k) = phi.col(k) * std::polar(chi_abs[k], phase[k]);
  return out;
}

Factorization extract_conditional(const SpinorField& psi, const Eigen::ArrayXd& S) {
  const QGrid& g = psi.grid;
  const Eigen::Index n = Eigen::Index(g.size());
  if (S.size() != n) throw ConfigError("phase array does not match the grid");
  const Eigen::Matrix2Xcd& v = psi.values;
  const Eigen::ArrayXd rho = psi.density();

  Factorization f;
  f.grid = g;
  f.time = psi.time;
  f.chi_abs = rho.sqrt();
  f.phase = S;
  f.mask = make_mask(rho);
  f.anchor = argmax_density(rho);
  f.phi.resize(2, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (rho[k] > 0.0)
      f.phi.col(k) = v.col(k) * (std::polar(1.0, -S[k]) / f.chi_abs[k]);
    else
      f.phi.col(k).setConstant(kNan);
  }

  SpinorFft fft(g);
  for (std::size_t d = 0; d < g.dims(); ++d) {
    const Eigen::Matrix2Xcd d1 = fft.derivative(v, d, 1);
    const Eigen::Matrix2Xcd d2 = fft.derivative(v, d, 2);
    Eigen::Matrix2Xcd dphi(2, n), d2phi(2, n);
    Eigen::ArrayXd G(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      if (!(rho[k] > 0.0)) {
        dphi.col(k).setConstant(kNan);
        d2phi.col(k).setConstant(kNan);
        G[k] = kNan;
        continue;
      }
      const auto p = v.col(k), p1 = d1.col(k), p2 = d2.col(k);
      const cd L = p.dot(p1) / rho[k];
      const double reL = L.real(), f0 = L.imag();
      // derivative of L = Psi^dag Psi' / rho
      const cd L1 = (p1.squaredNorm() + p.dot(p2)) / rho[k] - 2.0 * L * reL;
      const cd M(reL, f0), M1 = L1;
      const cd e = std::polar(1.0, -S[k]) / f.chi_abs[k];
      G[k] = f0;
      dphi.col(k) = (p1 - M * p) * e;
      d2phi.col(k) = (p2 - 2.0 * M * p1 - M1 * p + M * M * p) * e;
    }
    f.dphi.push_back(dphi);
    f.d2phi.push_back(d2phi);
    f.gauge_gradient.push_back(G);

    // central-difference residual Im(Phi^dag dPhi)
    const std::size_t st = g.stride(d), nd = g.axis(d).n_points;
    const double h = g.axis(d).spacing();
    Eigen::ArrayXd A(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const std::size_t i = g.index(std::size_t(k), d);
      const Eigen::Index up = i + 1 < nd ? k + Eigen::Index(st) : k;
      const Eigen::Index dn = i > 0 ? k - Eigen::Index(st) : k;
      const auto pk = f.phi.col(k);
      A[k] = (pk.dot(f.phi.col(up)) - pk.dot(f.phi.col(dn))).imag() / (double(up - dn) / double(st) * h);
    }
    f.tdvp_residual.push_back(A);
  }
  return f;
}

Factorization factorize(const SpinorField& psi) {
  double mismatch = 0.0;
  const Eigen::ArrayXd S = gauge_phase(psi, mismatch);
  Factorization f = extract_conditional(psi, S);
  f.path_mismatch = mismatch;
  return f;
}

namespace {

struct Potential {
  Eigen::ArrayXd s, c;
  double a;
};

// Phi^dag H_qBO Phi (real by hermiticity)
double qbo_expectation(const Potential& V, Eigen::Index k, const Eigen::Vector2cd& p) {
  return (V.s[k] + V.a) * std::norm(p[0]) + (V.s[k] - V.a) * std::norm(p[1]) +
         2.0 * V.c[k] * std::real(std::conj(p[0]) * p[1]);
}

Eigen::Matrix2Xcd aligned(const Factorization& nb, std::size_t anchor) {
  if (nb.anchor == anchor) return nb.phi;
  // redo the transport from the central frame's anchor; in 2-D the result
  // differs from the neighbour's own gauge by more than a constant
  SpinorField psi(nb.grid, nb.time);
  psi.values = nb.reconstruct();
  const Eigen::ArrayXd S = transport(psi, anchor, 0);
  Eigen::Matrix2Xcd out = nb.phi;
  for (Eigen::Index k = 0; k < out.cols(); ++k) out.col(k) *= std::polar(1.0, nb.phase[k] - S[k]);
  return out;
}

}  // namespace

SurfaceDecomposition decompose_tdpes(const Factorization& f, const Factorization* prev, const Factorization* next,
                                     const QboSurfaces& surfaces, const ModelParams& params) {
  if (!prev && !next) throw ConfigError("decompose_tdpes needs at least one neighbouring frame");
  if ((prev && prev->grid != f.grid) || (next && next->grid != f.grid))
    throw ConfigError("neighbouring frames must share the grid");
  const Eigen::Index n = Eigen::Index(f.grid.size());
  const Potential V{harmonic_potential(params, f.grid), coupling_field(params, f.grid), 0.5 * params.omega0};

  // phase-aware differences: exact for a uniform rotation exp(-i e t)
  Eigen::Matrix2Xcd phi_prev, phi_next;
  if (prev) phi_prev = aligned(*prev, f.anchor);
  if (next) phi_next = aligned(*next, f.anchor);
  const auto gd_at = [&](Eigen::Index k, const Eigen::Vector2cd& p) {
    if (prev && next)
      return (std::arg(p.dot(phi_next.col(k))) - std::arg(p.dot(phi_prev.col(k)))) / (next->time - prev->time);
    if (next) return std::arg(p.dot(phi_next.col(k))) / (next->time - f.time);
    return -std::arg(p.dot(phi_prev.col(k))) / (f.time - prev->time);
  };

  SurfaceDecomposition out;
  out.time = f.time;
  out.mask = f.mask;
  out.eps_wbo.resize(n);
  out.eps_kin.resize(n);
  out.eps_gd.resize(n);
  out.eps_total.resize(n);
  out.eps_direct.resize(n);
  out.c_upper_abs2.resize(n);
  out.c_lower_abs2.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Vector2cd p = f.phi.col(k);
    const cd cu = surfaces.vec_upper.col(k).cast<cd>().dot(p);
    const cd cl = surfaces.vec_lower.col(k).cast<cd>().dot(p);
    out.c_upper_abs2[k] = std::norm(cu);
    out.c_lower_abs2[k] = std::norm(cl);
    if (!f.mask[k]) {
      out.eps_wbo[k] = out.eps_kin[k] = out.eps_gd[k] = out.eps_total[k] = out.eps_direct[k] = kNan;
      continue;
    }
    const double wbo = std::norm(cu) * surfaces.upper[k] + std::norm(cl) * surfaces.lower[k];
    double kin = 0.0, kin_direct = 0.0, kin_imag = 0.0;
    for (std::size_t d = 0; d < f.dphi.size(); ++d) {
      const Eigen::Vector2cd d1 = f.dphi[d].col(k);
      const cd pd1 = p.dot(d1), pd2 = p.dot(f.d2phi[d].col(k));
      const double A = pd1.imag();
      kin += 0.5 * (d1.squaredNorm() - A * A);
      kin_direct += 0.5 * (-pd2.real() - A * A);
      kin_imag += -0.5 * pd2.imag();
    }
    const double gd = gd_at(k, p);

    out.eps_wbo[k] = wbo;
    out.eps_kin[k] = kin;
    out.eps_gd[k] = gd;
    out.eps_total[k] = wbo + kin + gd;
    out.eps_direct[k] = qbo_expectation(V, k, p) + kin_direct + gd;
    out.max_imag = std::max(out.max_imag, std::abs(kin_imag));
  }
  return out;
}

SurfaceDecomposition decompose_cross_section(const CrossSection& cs, const WWModeSet& modes) {
  ModelParams p;
  p.omega0 = modes.omega0;
  p.mode_freqs = {cs.omega_i};
  p.couplings = {modes.coupling};
  const QboSurfaces surf = qbo_surfaces(p, cs.grid);
  const Potential V{harmonic_potential(p, cs.grid), coupling_field(p, cs.grid), 0.5 * p.omega0};

  const Eigen::Index n = Eigen::Index(cs.grid.size());
  SurfaceDecomposition out;
  out.time = cs.time;
  out.mask = cs.mask;
  for (auto* a : {&out.eps_wbo, &out.eps_kin, &out.eps_gd, &out.eps_total, &out.eps_direct, &out.c_upper_abs2,
                  &out.c_lower_abs2})
    a->resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Vector2cd ph = cs.phi.col(k);
    const cd cu = surf.vec_upper.col(k).cast<cd>().dot(ph);
    const cd cl = surf.vec_lower.col(k).cast<cd>().dot(ph);
    out.c_upper_abs2[k] = std::norm(cu);
    out.c_lower_abs2[k] = std::norm(cl);
    if (!cs.mask[k]) {
      out.eps_wbo[k] = out.eps_kin[k] = out.eps_gd[k] = out.eps_total[k] = out.eps_direct[k] = kNan;
      continue;
    }
    const Eigen::Vector2cd d1 = cs.dphi.col(k);
    const cd pd1 = ph.dot(d1), pd2 = ph.dot(cs.d2phi.col(k));
    const double A = pd1.imag();
    const double wbo = std::norm(cu) * surf.upper[k] + std::norm(cl) * surf.lower[k];
    const double kin = 0.5 * (d1.squaredNorm() - A * A + cs.transverse_kinetic[k]);
    const double gd = ph.dot(cs.dphi_dt.col(k)).imag();
    out.eps_wbo[k] = wbo;
    out.eps_kin[k] = kin;
    out.eps_gd[k] = gd;
    out.eps_total[k] = wbo + kin + gd;
    out.eps_direct[k] = qbo_expectation(V, k, ph) + 0.5 * (-pd2.real() - A * A + cs.transverse_kinetic[k]) + gd;
    out.max_imag = std::max(out.max_imag, std::abs(0.5 * pd2.imag()));
  }
  return out;
}

void check_frame_spacing(const SurfaceDecomposition& fine, const SurfaceDecomposition& coarse) {
  const Mask m = fine.mask && coarse.mask;
  const double diff = max_on(fine.eps_gd - coarse.eps_gd, m);
  const double scale = max_on(fine.eps_gd, m);
  if (diff > 0.01 * scale) {
    std::ostringstream os;
    os << "frame spacing too coarse at t = " << fine.time << ": eps_GD changes by " << diff
       << " (L-inf " << scale << ") when the spacing doubles";
    throw InvariantViolation(os.str());
  }
}

GaugeReport gauge_transform_check(const Factorization& f, const QboSurfaces& surfaces, const ModelParams& params,
                                  const Eigen::ArrayXd& theta) {
  const QGrid& g = f.grid;
  const Eigen::Index n = Eigen::Index(g.size());
  if (theta.size() != n) throw ConfigError("theta does not match the grid");
  (void)params;

  GaugeReport r;
  const Eigen::Matrix2Xcd before = f.reconstruct();
  Eigen::Matrix2Xcd phi2(2, n);
  for (Eigen::Index k = 0; k < n; ++k) phi2.col(k) = f.phi.col(k) * std::polar(1.0, theta[k]);
  const Eigen::ArrayXd S2 = f.phase - theta;

  for (Eigen::Index k = 0; k < n; ++k) {
    if (!f.mask[k]) continue;
    const Eigen::Vector2cd rec = phi2.col(k) * std::polar(f.chi_abs[k], S2[k]);
    r.reconstruction_change = std::max(r.reconstruction_change, (rec - before.col(k)).norm());
    const auto wbo = [&](const Eigen::Vector2cd& p) {
      return std::norm(surfaces.vec_upper.col(k).cast<cd>().dot(p)) * surfaces.upper[k] +
             std::norm(surfaces.vec_lower.col(k).cast<cd>().dot(p)) * surfaces.lower[k];
    };
    r.wbo_change = std::max(r.wbo_change, std::abs(wbo(phi2.col(k)) - wbo(f.phi.col(k))));
  }

  for (std::size_t d = 0; d < g.dims(); ++d) {
    const Eigen::ArrayXd dth = fd_derivative(theta, g, d, 1, 8);
    Eigen::ArrayXd shift = Eigen::ArrayXd::Constant(n, kNan);
    for (Eigen::Index k = 0; k < n; ++k) {
      if (!f.mask[k]) continue;
      const Eigen::Vector2cd p = f.phi.col(k), d1 = f.dphi[d].col(k);
      const Eigen::Vector2cd p2 = phi2.col(k);
      const Eigen::Vector2cd d2 = (d1 + cd(0.0, dth[k]) * p) * std::polar(1.0, theta[k]);
      const double A = p.dot(d1).imag(), A2 = p2.dot(d2).imag();
      shift[k] = A2 - A;
      r.a_shift_error = std::max(r.a_shift_error, std::abs(A2 - A - dth[k]));
      const double k1 = 0.5 * (d1 - cd(0.0, A) * p).squaredNorm();
      const double k2 = 0.5 * (d2 - cd(0.0, A2) * p2).squaredNorm();
      r.kinetic_change = std::max(r.kinetic_change, std::abs(k2 - k1));
    }
    r.a_shift.push_back(shift);
  }
  return r;
}

}  // namespace photonef
