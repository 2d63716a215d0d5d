#include "photonef/run.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "photonef/errors.hpp"
#include "photonef/observables.hpp"
#include "photonef/ww.hpp"

namespace photonef {

namespace fs = std::filesystem;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_time_label(double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", t);
  return buf;
}

void sweep_frames(const RunConfig& cfg,
                  const std::function<void(const FrameWindow&, bool stored, bool snapshot)>& visit) {
  const QGrid g = cfg.grid();
  const PropagatorConfig& pc = cfg.propagator;
  pc.validate(cfg.model);
  const long n_steps = long(pc.n_steps);

  std::map<long, std::pair<bool, bool>> targets;
  for (long s = 0; s <= n_steps; s += long(pc.save_stride)) targets[s].first = true;
  targets[n_steps].first = true;
  for (double t : cfg.snapshot_times) targets[std::lround(t / pc.dt)].second = true;

  std::set<long> needed;
  for (const auto& [s, flags] : targets)
    for (long o = -2; o <= 2; ++o) needed.insert(s + o);

  const SpinorField init = build_initial_state(cfg.initial_state, cfg.model, g);
  std::map<long, SpinorField> cache;
  cache[0] = init;
  {
    Propagator back(cfg.model, g, pc.method, -pc.dt);
    SpinorField s = init;
    for (long k = -1; k >= -2; --k) {
      back.advance(s, 1);
      s.time = double(k) * pc.dt;
      cache[k] = s;
    }
  }

  Propagator fwd(cfg.model, g, pc.method, pc.dt);
  SpinorField cur = init;
  long step = 0;
  for (auto it = targets.begin(); it != targets.end(); ++it) {
    const long T = it->first;
    while (step < T + 2) {
      fwd.advance(cur, 1);
      ++step;
      cur.time = double(step) * pc.dt;
      if (needed.count(step)) cache[step] = cur;
    }
    FrameWindow w;
    for (long o = -2; o <= 2; ++o) w[std::size_t(o + 2)] = &cache.at(T + o);
    check_frame(*w[2]);
    visit(w, it->second.first, it->second.second);
    auto nx = std::next(it);
    const long keep = nx == targets.end() ? T + 3 : nx->first - 2;
    for (auto c = cache.begin(); c != cache.end() && c->first < keep;) c = cache.erase(c);
  }
}

namespace {

const char* kSnapshotHeader = "q,chi_abs2,C1_abs2,C2_abs2,eps_wbo,eps_kin,eps_gd,eps_total,qbo_lower,qbo_upper,mask\n";

std::ofstream open_out(const fs::path& p) {
  std::ofstream o(p);
  if (!o) throw ConfigError("cannot write " + p.string());
  return o;
}

struct SnapshotRows {
  std::vector<std::size_t> points;  // flat indices along the cut
  Eigen::ArrayXd q;
};

SnapshotRows cut_points(const QGrid& g) {
  SnapshotRows r;
  const std::size_t n = g.axis(0).n_points;
  r.q.resize(Eigen::Index(n));
  const std::size_t z = g.dims() == 2 ? *g.zero_index(1) : 0;
  for (std::size_t i = 0; i < n; ++i) {
    r.points.push_back(g.flat(i, z));
    r.q[Eigen::Index(i)] = g.axis(0).coord(i);
  }
  return r;
}

void write_snapshot(const fs::path& path, const SnapshotRows& rows, const Eigen::ArrayXd& chi2,
                    const SurfaceDecomposition& d, const QboSurfaces& s) {
  auto o = open_out(path);
  o << kSnapshotHeader;
  for (std::size_t r = 0; r < rows.points.size(); ++r) {
    const Eigen::Index k = Eigen::Index(rows.points[r]);
    const bool m = d.mask[k];
    const auto eps = [&](const Eigen::ArrayXd& a) { return m ? format_number(a[k]) : std::string("nan"); };
    o << format_number(rows.q[Eigen::Index(r)]) << ',' << format_number(chi2[k]) << ','
      << format_number(d.c_upper_abs2[k]) << ',' << format_number(d.c_lower_abs2[k]) << ',' << eps(d.eps_wbo)
      << ',' << eps(d.eps_kin) << ',' << eps(d.eps_gd) << ',' << eps(d.eps_total) << ','
      << format_number(s.lower[k]) << ',' << format_number(s.upper[k]) << ',' << (m ? 1 : 0) << '\n';
  }
}

void write_debug(const fs::path& path, const SnapshotRows& rows, const SurfaceDecomposition& d,
                 const Factorization* f) {
  auto o = open_out(path);
  o << "q,eps_direct,eps_kin_unhalved,tdvp_residual,mask\n";
  for (std::size_t r = 0; r < rows.points.size(); ++r) {
    const Eigen::Index k = Eigen::Index(rows.points[r]);
    const double res = f ? f->tdvp_residual[0][k] : 0.0;
    o << format_number(rows.q[Eigen::Index(r)]) << ',' << format_number(d.eps_direct[k]) << ','
      << format_number(2.0 * d.eps_kin[k]) << ',' << format_number(res) << ',' << (d.mask[k] ? 1 : 0) << '\n';
  }
}

using json = nlohmann::ordered_json;

void run_grid(const RunConfig& cfg, const fs::path& dir, json& derived, json& files) {
  const QGrid g = cfg.grid();
  const QboSurfaces surf = qbo_surfaces(cfg.model, g);
  const SnapshotRows rows = cut_points(g);

  auto ac = open_out(dir / "autocorr.csv");
  auto pop = open_out(dir / "populations.csv");
  ac << "t,A_psi,A_phi\n";
  pop << "t,excited_pop,photon_number,e_field\n";
  files.push_back("autocorr.csv");
  files.push_back("populations.csv");

  Factorization f0;
  SpinorField psi0;
  bool have0 = false;
  json snaps = json::object();
  double max_path = 0.0;

  sweep_frames(cfg, [&](const FrameWindow& w, bool stored, bool snapshot) {
    const SpinorField& cur = *w[2];
    Factorization f = factorize(cur);
    max_path = std::max(max_path, f.path_mismatch);
    if (!have0) {
      f0 = f;
      psi0 = cur;
      have0 = true;
    }
    if (stored) {
      const Populations p = populations_and_photons(cur, cfg.model);
      double photons = 0.0, field = 0.0;
      for (double n : p.photons) photons += n;
      for (double e : electric_field(cur, cfg.model)) field += e;
      ac << format_number(cur.time) << ',' << format_number(overlap_abs2(psi0, cur)) << ','
         << format_number(autocorr_phi(f0, f)) << '\n';
      pop << format_number(cur.time) << ',' << format_number(p.excited) << ',' << format_number(photons) << ','
          << format_number(field) << '\n';
    }
    if (snapshot) {
      const Factorization m1 = factorize(*w[1]), p1 = factorize(*w[3]);
      const Factorization m2 = factorize(*w[0]), p2 = factorize(*w[4]);
      const SurfaceDecomposition fine = decompose_tdpes(f, &m1, &p1, surf, cfg.model);
      const SurfaceDecomposition coarse = decompose_tdpes(f, &m2, &p2, surf, cfg.model);
      check_frame_spacing(fine, coarse);
      const std::string label = format_time_label(cur.time);
      const std::string name = "snapshot_" + label + ".csv";
      write_snapshot(dir / name, rows, f.density(), fine, surf);
      files.push_back(name);
      snaps[label] = name;
      if (cfg.debug) {
        const std::string dbg = "snapshot_" + label + "_debug.csv";
        write_debug(dir / dbg, rows, fine, &f);
        files.push_back(dbg);
      }
    }
  });

  derived["t_final"] = double(cfg.propagator.n_steps) * cfg.propagator.dt;
  derived["grid_spacing"] = json::array();
  for (const auto& a : g.axes()) derived["grid_spacing"].push_back(a.spacing());
  if (g.dims() == 2) {
    derived["snapshot_cut"] = "q1 axis at q2 = 0";
    derived["max_gauge_path_mismatch"] = max_path;
  }
  derived["snapshots"] = snaps;
}

void run_ww(const RunConfig& cfg, const fs::path& dir, json& derived, json& files) {
  const auto& w = cfg.ww;
  const WWModeSet modes = w.spacing > 0.0
                              ? WWModeSet::with_spacing(cfg.model.omega0, w.coupling, w.cross_section_freq, w.spacing, w.band)
                              : WWModeSet::quasi_continuum(cfg.model.omega0, w.coupling, w.cross_section_freq,
                                                           w.spacing_ratio, w.band);
  const double gam = modes.gamma();
  if (!(gam > 0.0)) throw ConfigError("wigner_weisskopf runs need a nonzero coupling");
  const std::size_t i = modes.index_of(w.cross_section_freq);
  const QGrid g = cfg.grid();

  std::vector<double> times;
  for (std::size_t k = 0; k < w.n_frames; ++k) times.push_back(double(k) / double(w.n_frames - 1) * w.t_final / gam);
  std::vector<double> snap_times;
  for (double t : cfg.snapshot_times) snap_times.push_back(t / gam);

  auto coefficients = [&](const std::vector<double>& ts) {
    if (w.solver == "ode") return ww_ode_integrate(modes, ts);
    std::vector<WWCoefficients> c;
    for (double t : ts) c.push_back(ww_closed_form(modes, t));
    return c;
  };

  const std::vector<WWCoefficients> frames = coefficients(times);
  const CrossSection cs0 = cross_section_state(frames.front(), modes, i, g);
  const Eigen::ArrayXd q = g.coordinates(0);

  auto ac = open_out(dir / "autocorr.csv");
  auto pop = open_out(dir / "populations.csv");
  ac << "t,A_psi,A_phi\n";
  pop << "t,excited_pop,photon_number,e_field\n";
  files.push_back("autocorr.csv");
  files.push_back("populations.csv");
  double max_deficit = 0.0;
  for (const auto& c : frames) {
    const CrossSection cs = cross_section_state(c, modes, i, g);
    const Eigen::ArrayXd rho = cs.chi_abs.square();
    const double field = cs.omega_i * (q * rho).sum() / rho.sum();
    ac << format_number(c.time) << ',' << format_number(std::norm(c.a)) << ',' << format_number(autocorr_phi(cs0, cs))
       << '\n';
    pop << format_number(c.time) << ',' << format_number(std::norm(c.a)) << ',' << format_number(c.b.abs2().sum())
        << ',' << format_number(field) << '\n';
    max_deficit = std::max(max_deficit, std::abs(c.truncation_deficit));
  }

  ModelParams cut;
  cut.omega0 = modes.omega0;
  cut.mode_freqs = {modes.freqs[Eigen::Index(i)]};
  cut.couplings = {modes.coupling};
  const QboSurfaces surf = qbo_surfaces(cut, g);
  const SnapshotRows rows = cut_points(g);
  json snaps = json::object();
  const std::vector<WWCoefficients> sc = coefficients(snap_times);
  for (const auto& c : sc) {
    const CrossSection cs = cross_section_state(c, modes, i, g);
    const SurfaceDecomposition d = decompose_cross_section(cs, modes);
    const std::string label = format_time_label(c.time);
    const std::string name = "snapshot_" + label + ".csv";
    write_snapshot(dir / name, rows, cs.chi_abs.square(), d, surf);
    files.push_back(name);
    snaps[label] = name;
    if (cfg.debug) {
      const std::string dbg = "snapshot_" + label + "_debug.csv";
      write_debug(dir / dbg, rows, d, nullptr);
      files.push_back(dbg);
    }
  }

  derived["gamma"] = gam;
  derived["mode_spacing"] = modes.spacing();
  derived["box_length"] = modes.box_length;
  derived["light_speed"] = modes.light_speed;
  derived["first_mode_index"] = modes.first_index;
  derived["n_modes"] = modes.n_modes;
  derived["cross_section_mode"] = i;
  derived["cross_section_omega"] = modes.freqs[Eigen::Index(i)];
  derived["lamb_shift_removed_in_ode"] = modes.lamb_shift();
  derived["log_transverse_constant"] = cs0.log_transverse_constant;
  derived["chi_abs2_scale"] = "snapshot chi_abs2 omits exp(2 * log_transverse_constant)";
  derived["max_truncation_deficit"] = max_deficit;
  derived["t_final"] = w.t_final / gam;
  derived["snapshots"] = snaps;
}

}  // namespace

void run(const RunConfig& cfg) {
  cfg.validate();
  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());

  json manifest;
  manifest["config"] = emit_config(cfg);
  manifest["defaults_applied"] = cfg.defaulted;
  json derived = json::object();
  json files = json::array();
  if (cfg.mode == RunMode::wigner_weisskopf)
    run_ww(cfg, dir, derived, files);
  else
    run_grid(cfg, dir, derived, files);
  manifest["derived"] = derived;
  manifest["files"] = files;
  auto o = open_out(dir / "manifest.json");
  o << manifest.dump(2) << '\n';
}

}  // namespace photonef
