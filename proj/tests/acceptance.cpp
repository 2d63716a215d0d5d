// One line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "photonef/config.hpp"
#include "photonef/errors.hpp"
#include "photonef/factorization.hpp"
#include "photonef/fock_oracle.hpp"
#include "photonef/observables.hpp"
#include "photonef/run.hpp"
#include "photonef/ww.hpp"

using namespace photonef;

namespace {

// tolerances
constexpr double kDecayRateTol = 0.05;
constexpr double kPlateauTol = 0.10;
constexpr double kKinSlopeTol = 0.10;
constexpr double kKinTailRatio = 1e-2;
constexpr double kInfidelityTol = 1e-6;
constexpr double kRabiTimeTol = 0.05;
constexpr double kRabiMinimum = 0.05;
constexpr double kPncTol = 1e-10;
constexpr double kReconstructionTol = 1e-12;
constexpr double kDensityTol = 1e-14;
constexpr double kResidualTol = 1e-8;
constexpr double kClosureTol = 1e-6;
constexpr double kParityPsiTol = 1e-10;
constexpr double kParityCoefTol = 1e-8;
constexpr double kSurfaceTol = 1e-8;
constexpr double kGaugeTol = 1e-8;
constexpr double kPeriodThreshold = 0.9;

const QGrid kGrid = QGrid::symmetric(20.0, 513);

int failures = 0;

void report(int n, bool ok, const std::string& detail, double seconds) {
  std::printf("criterion %d: %s %s (%.1f s)\n", n, ok ? "PASS" : "FAIL", detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void timed(int n, const std::function<std::pair<bool, std::string>()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::pair<bool, std::string> r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("threw: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(n, r.first, r.second, s);
}

// least-squares slope of y(x)
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double max_masked(const Eigen::ArrayXd& a, const Mask& m) {
  double r = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k)
    if (m[k]) r = std::max(r, std::abs(a[k]));
  return r;
}

double rabi_g(double dl) { return dl * std::sqrt(0.4 / 2.0); }

std::pair<bool, std::string> decay_law() {
  const WWModeSet m = WWModeSet::quasi_continuum(0.4, 0.01, 0.4);
  std::vector<double> t, y;
  for (int k = 0; k <= 300; ++k) t.push_back(3.0 * k / 300.0 / m.gamma());
  for (const auto& c : ww_ode_integrate(m, t)) y.push_back(std::log(std::norm(c.a)));
  const double rate = -slope(t, y);
  const double rel = std::abs(rate / m.gamma() - 1.0);
  return {rel < kDecayRateTol, fmt("fitted rate %.6g vs gamma %.6g, rel err %.3g (tol %.2g), %zu modes", rate,
                                   m.gamma(), rel, kDecayRateTol, m.n_modes)};
}

// max relative plateau error over |q| in [4, 8] at t*gamma in tg
double plateau_error(double dl, double tg) {
  const WWModeSet m = WWModeSet::quasi_continuum(0.4, dl, 0.411);
  const std::size_t i = m.index_of(0.411), z = *kGrid.zero_index(0);
  const SurfaceDecomposition d =
      decompose_cross_section(cross_section_state(ww_closed_form(m, tg / m.gamma()), m, i, kGrid), m);
  const double target = 0.4 - 0.411;
  double err = 0.0;
  for (std::size_t k = 0; k < kGrid.size(); ++k) {
    const double q = std::abs(kGrid.axis(0).coord(k));
    if (q < 4.0 - 1e-9 || q > 8.0 + 1e-9 || !d.mask[Eigen::Index(k)]) continue;
    err = std::max(err, std::abs(d.eps_gd[Eigen::Index(k)] - d.eps_gd[Eigen::Index(z)] - target) / std::abs(target));
  }
  return err;
}

std::pair<bool, std::string> gd_plateau() {
  std::string detail = "preset coupling 0.01, |q| in [4,8]:";
  double worst = 0.0;
  for (double tg : {5.0, 6.0, 7.0, 8.0, 10.0, 12.0}) {
    const double e = plateau_error(0.01, tg);
    worst = std::max(worst, e);
    detail += fmt(" %g/G %.3g", tg, e);
  }
  detail += fmt("; tol %.2g; diagnostic coupling 0.003 at 5/G: %.3g", kPlateauTol, plateau_error(0.003, 5.0));
  return {worst < kPlateauTol, detail};
}

std::pair<bool, std::string> kin_peak() {
  const WWModeSet m = WWModeSet::quasi_continuum(0.4, 0.01, 0.4);
  const std::size_t i = m.index_of(0.4), z = *kGrid.zero_index(0);
  std::vector<double> t, y;
  for (int k = 0; k <= 30; ++k) {
    const double tt = (2.0 + 3.0 * k / 30.0) / m.gamma();
    const SurfaceDecomposition d = decompose_cross_section(cross_section_state(ww_closed_form(m, tt), m, i, kGrid), m);
    t.push_back(tt);
    y.push_back(std::log(d.eps_kin[Eigen::Index(z)]));
  }
  const double s = slope(t, y), rel = std::abs(s / m.gamma() - 1.0);
  const SurfaceDecomposition d5 =
      decompose_cross_section(cross_section_state(ww_closed_form(m, 5.0 / m.gamma()), m, i, kGrid), m);
  const double sigma = 1.0 / std::sqrt(2.0 * 0.4);
  const Eigen::Index k3 = Eigen::Index(z + std::size_t(std::llround(3.0 * sigma / kGrid.axis(0).spacing())));
  double peak = 0.0;
  for (Eigen::Index k = 0; k < d5.eps_kin.size(); ++k)
    if (d5.mask[k]) peak = std::max(peak, d5.eps_kin[k]);
  const double ratio = d5.eps_kin[k3] / peak;
  return {rel < kKinSlopeTol && ratio < kKinTailRatio,
          fmt("log-slope %.6g vs gamma %.6g (rel %.3g, tol %.2g); eps_kin(3 sigma)/peak = %.3g (tol %.2g)", s,
              m.gamma(), rel, kKinSlopeTol, ratio, kKinTailRatio)};
}

std::pair<bool, std::string> oracle_equivalence() {
  std::string detail;
  bool ok = true;
  for (double dl : {0.01, 0.1, 0.4}) {
    const double t = dl < 0.2 ? M_PI / rabi_g(dl) : 2000.0;
    const ModelParams p = ModelParams::single_mode(0.4, dl);
    PropagatorConfig cfg;
    cfg.n_steps = std::size_t(std::llround(t / cfg.dt));
    cfg.save_stride = cfg.n_steps;
    for (auto init : {InitialState::qbo_excited, InitialState::factorized_excited}) {
      const SpinorField psi0 = build_initial_state(init, p, kGrid);
      const SpinorField a = propagate(psi0, p, cfg).frames.back();
      // the dressed strong-coupling state has weight beyond 40 photons at t = 0
      const std::size_t n_max = dl > 0.2 && init == InitialState::qbo_excited ? 80 : 40;
      const SpinorField b = fock_oracle_propagate(psi0, p, cfg, n_max).frames.back();
      const double inf = 1.0 - overlap_abs2(a, b);
      ok = ok && inf < kInfidelityTol;
      detail += fmt("dl %g %s n_max %zu t=%.1f: %.2e; ", dl, to_string(init).c_str(), n_max, a.time, inf);
    }
  }
  return {ok, detail + fmt("tol %.0e", kInfidelityTol)};
}

std::pair<bool, std::string> rabi() {
  const double dl = 0.01, g = rabi_g(dl);
  const ModelParams p = ModelParams::single_mode(0.4, dl);
  SpinorField psi = build_initial_state(InitialState::qbo_excited, p, kGrid);
  Propagator prop(p, kGrid, Method::split_operator, 0.005);
  double tmin = 0.0, pmin = 1.0, back = 0.0;
  const double t_half = M_PI / (2.0 * g), t_full = M_PI / g;
  while (psi.time < 1.1 * t_full) {
    prop.advance(psi, 20);
    const double pe = populations_and_photons(psi, p).excited;
    if (psi.time < 1.5 * t_half && pe < pmin) {
      pmin = pe;
      tmin = psi.time;
    }
    if (std::abs(psi.time - t_full) < kRabiTimeTol * t_full) back = std::max(back, pe);
  }
  const double rel = std::abs(tmin / t_half - 1.0);
  return {rel < kRabiTimeTol && pmin < kRabiMinimum && back > 1.0 - kRabiMinimum,
          fmt("minimum %.4g at t=%.1f vs cos^2(gt) minimum at pi/(2g)=%.1f (rel %.3g); max within 5%% of "
              "pi/g=%.1f: %.4g",
              pmin, tmin, t_half, rel, t_full, back)};
}

struct SuiteStats {
  double pnc = 0, rec = 0, dens = 0, res = 0, res2d_diag = 0, closure = 0;
  double psi2 = 0, c2 = 0, surface = 0;
  std::size_t frames = 0;
};

void sweep_preset(const std::string& name, SuiteStats& s) {
  const RunConfig cfg = parse_config(preset_text(name));
  const ModelParams& p = cfg.model;
  const QGrid g = cfg.grid();
  const QboSurfaces surf = qbo_surfaces(p, g);
  const bool two_d = g.dims() == 2;
  const std::size_t z = two_d ? g.flat(*g.zero_index(0), *g.zero_index(1)) : *g.zero_index(0);
  sweep_frames(cfg, [&](const FrameWindow& w, bool stored, bool) {
    if (!stored) return;
    const SpinorField& psi = *w[2];
    const Factorization f = factorize(psi), fp = factorize(*w[1]), fn = factorize(*w[3]);
    const Eigen::Matrix2Xcd rec = f.reconstruct();
    for (Eigen::Index k = 0; k < rec.cols(); ++k) {
      if (!f.mask[k]) continue;
      s.pnc = std::max(s.pnc, std::abs(f.phi.col(k).squaredNorm() - 1.0));
      s.rec = std::max(s.rec, (rec.col(k) - psi.values.col(k)).norm());
    }
    s.dens = std::max(s.dens, (f.density() - psi.density()).abs().maxCoeff());
    if (two_d) {
      s.res = std::max(s.res, max_masked(f.tdvp_residual[1], f.mask));
      s.res2d_diag = std::max(s.res2d_diag, max_masked(f.tdvp_residual[0], f.mask));
    } else {
      s.res = std::max(s.res, max_masked(f.tdvp_residual[0], f.mask));
    }
    const SurfaceDecomposition d = decompose_tdpes(f, &fp, &fn, surf, p);
    s.closure = std::max(s.closure, max_masked(d.eps_total - d.eps_direct, d.mask));
    s.psi2 = std::max(s.psi2, std::abs(psi.values(1, Eigen::Index(z))));
    s.c2 = std::max(s.c2, std::sqrt(d.c_lower_abs2[Eigen::Index(z)]));
    if (psi.time == 0.0 && cfg.initial_state == InitialState::qbo_excited)
      s.surface = std::max(s.surface, max_masked(d.eps_wbo - surf.upper, d.mask));
    ++s.frames;
  });
}

void sweep_ww(const std::string& name, SuiteStats& s) {
  const RunConfig cfg = parse_config(preset_text(name));
  const WWModeSet m = WWModeSet::quasi_continuum(cfg.model.omega0, cfg.ww.coupling, cfg.ww.cross_section_freq,
                                                 cfg.ww.spacing_ratio, cfg.ww.band);
  const std::size_t i = m.index_of(cfg.ww.cross_section_freq);
  const QGrid g = cfg.grid();
  for (std::size_t k = 0; k < cfg.ww.n_frames; ++k) {
    const double t = cfg.ww.t_final * double(k) / double(cfg.ww.n_frames - 1) / m.gamma();
    const CrossSection cs = cross_section_state(ww_closed_form(m, t), m, i, g);
    SpinorField psi(g, t);
    psi.values = cs.psi;
    const Eigen::ArrayXd S = gauge_phase(psi);
    for (Eigen::Index j = 0; j < cs.phi.cols(); ++j) {
      if (!cs.mask[j]) continue;
      s.pnc = std::max(s.pnc, std::abs(cs.phi.col(j).squaredNorm() - 1.0));
      s.rec = std::max(s.rec, (cs.chi_abs[j] * cs.phi.col(j) - cs.psi.col(j)).norm());
      s.dens = std::max(s.dens, std::abs(cs.chi_abs[j] * cs.chi_abs[j] - cs.psi.col(j).squaredNorm()));
      s.res = std::max(s.res, std::abs(S[j]));
    }
    const SurfaceDecomposition d = decompose_cross_section(cs, m);
    s.closure = std::max(s.closure, max_masked(d.eps_total - d.eps_direct, d.mask));
    ++s.frames;
  }
}

SuiteStats suite;

std::pair<bool, std::string> identity_suite() {
  std::string names;
  for (const auto& n : preset_names()) {
    if (n.rfind("ww_", 0) == 0)
      sweep_ww(n, suite);
    else
      sweep_preset(n, suite);
    names += n + " ";
  }
  const bool ok = suite.pnc <= kPncTol && suite.rec <= kReconstructionTol && suite.dens <= kDensityTol &&
                  suite.res <= kResidualTol && suite.closure <= kClosureTol;
  return {ok, fmt("%zu frames; PNC %.2e, reconstruction %.2e, density %.2e, residual %.2e, closure %.2e; "
                  "2-D first-axis residual (diagnostic) %.2e",
                  suite.frames, suite.pnc, suite.rec, suite.dens, suite.res, suite.closure, suite.res2d_diag)};
}

std::pair<bool, std::string> parity() {
  return {suite.psi2 <= kParityPsiTol && suite.c2 <= kParityCoefTol,
          fmt("max |Psi2(0,t)| %.2e (tol %.0e), max |C2(0,t)| %.2e (tol %.0e)", suite.psi2, kParityPsiTol, suite.c2,
              kParityCoefTol)};
}

std::pair<bool, std::string> surface_identity() {
  return {suite.surface <= kSurfaceTol, fmt("max |eps_wBO - eps_qBO+| at t=0 %.2e (tol %.0e)", suite.surface, kSurfaceTol)};
}

std::pair<bool, std::string> gauge() {
  double worst = 0.0, ashift = 0.0;
  bool ok = true;
  std::size_t n = 0;
  const Eigen::ArrayXd q = kGrid.coordinates(0);
  const Eigen::ArrayXd theta = 0.1 * q.sin(), dtheta = 0.1 * q.cos();
  for (double dl : {0.01, 0.1, 0.4}) {
    const ModelParams p = ModelParams::single_mode(0.4, dl);
    const QboSurfaces surf = qbo_surfaces(p, kGrid);
    for (auto init : {InitialState::qbo_excited, InitialState::factorized_excited}) {
      SpinorField psi = build_initial_state(init, p, kGrid);
      Propagator prop(p, kGrid, Method::split_operator, 0.005);
      for (double t : {0.0, 250.0, 500.0, 1000.0, 2000.0}) {
        prop.advance(psi, std::size_t(std::llround((t - psi.time) / 0.005)));
        const Factorization f = factorize(psi);
        const GaugeReport r = gauge_transform_check(f, surf, p, theta);
        ok = ok && r.passed(kGaugeTol);
        worst = std::max({worst, r.reconstruction_change, r.wbo_change, r.kinetic_change, r.a_shift_error});
        ashift = std::max(ashift, max_masked(r.a_shift[0] - dtheta, f.mask));
        ++n;
      }
    }
  }
  ok = ok && ashift <= kGaugeTol;
  return {ok, fmt("%zu frames; worst invariance change %.2e, A-shift vs 0.1 cos q %.2e (tol %.0e)", n, worst, ashift,
                  kGaugeTol)};
}

// first local maximum of A_psi above the threshold, or -1; also every such maximum
double first_period(double dl, InitialState init, std::vector<std::pair<double, double>>& maxima) {
  const ModelParams p = ModelParams::single_mode(0.4, dl);
  const SpinorField psi0 = build_initial_state(init, p, kGrid);
  SpinorField psi = psi0;
  Propagator prop(p, kGrid, Method::split_operator, 0.005);
  std::vector<double> t{0.0}, a{1.0};
  while (psi.time < 2000.0 - 1e-9) {
    prop.advance(psi, 20);
    t.push_back(psi.time);
    a.push_back(overlap_abs2(psi0, psi));
  }
  double first = -1.0;
  for (std::size_t k = 1; k + 1 < a.size(); ++k) {
    if (a[k] > a[k - 1] && a[k] >= a[k + 1] && a[k] > kPeriodThreshold) {
      maxima.emplace_back(t[k], a[k]);
      if (first < 0) first = t[k];
    }
  }
  return first;
}

std::pair<bool, std::string> periodicity() {
  std::string detail;
  bool ok = true;
  for (auto init : {InitialState::qbo_excited, InitialState::factorized_excited}) {
    std::vector<std::pair<double, double>> m1, m2, m4;
    const double p1 = first_period(0.01, init, m1), p2 = first_period(0.1, init, m2);
    first_period(0.4, init, m4);
    const bool dec = p1 > 0 && p2 > 0 && p2 < p1;
    ok = ok && dec && m4.empty();
    detail += fmt("%s: period %.1f (0.01) > %.1f (0.1) %s; 0.4 maxima above %.1f: %zu", to_string(init).c_str(), p1, p2,
                  dec ? "yes" : "no", kPeriodThreshold, m4.size());
    if (!m4.empty()) detail += fmt(" (first %.4g at t=%.1f)", m4.front().second, m4.front().first);
    detail += "; ";
  }
  return {ok, detail};
}

}  // namespace

int main() {
  timed(1, decay_law);
  timed(2, gd_plateau);
  timed(3, kin_peak);
  timed(4, oracle_equivalence);
  timed(5, rabi);
  timed(6, identity_suite);
  timed(7, parity);
  timed(8, surface_identity);
  timed(9, gauge);
  timed(10, periodicity);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
