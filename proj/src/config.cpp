#include "photonef/config.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "photonef/errors.hpp"
#include "photonef/run.hpp"

namespace photonef {

RunMode parse_run_mode(const std::string& s) {
  if (s == "single_mode") return RunMode::single_mode;
  if (s == "two_mode") return RunMode::two_mode;
  if (s == "wigner_weisskopf") return RunMode::wigner_weisskopf;
  throw ConfigError("unknown run mode '" + s + "'");
}

std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::single_mode: return "single_mode";
    case RunMode::two_mode: return "two_mode";
    default: return "wigner_weisskopf";
  }
}

QGrid RunConfig::grid() const { return QGrid::symmetric(half_width, n_points); }

void RunConfig::validate() const {
  const QGrid g = grid();
  if (mode == RunMode::wigner_weisskopf) {
    if (g.dims() != 1) throw ConfigError("wigner_weisskopf cross-sections need a 1-D grid");
    if (!(model.omega0 > 0.0)) throw ConfigError("omega0 must be positive");
    if (ww.solver != "closed_form" && ww.solver != "ode")
      throw ConfigError("WWModeSet.solver must be closed_form or ode");
    if (ww.n_frames < 2) throw ConfigError("WWModeSet.n_frames must be >= 2");
    if (!(ww.t_final > 0.0)) throw ConfigError("WWModeSet.t_final must be positive");
    if (ww.coupling == 0.0 && !(ww.spacing > 0.0))
      throw ConfigError("zero WW coupling needs an explicit WWModeSet.spacing");
    for (double t : snapshot_times)
      if (t < 0.0 || t > ww.t_final) throw ConfigError("snapshot time outside the run window");
    return;
  }
  model.validate();
  const std::size_t want = mode == RunMode::single_mode ? 1 : 2;
  if (model.n_modes() != want)
    throw ConfigError(to_string(mode) + " needs " + std::to_string(want) + " mode(s)");
  if (g.dims() != want) throw ConfigError("grid dimension does not match the run mode");
  if (want == 2 && !g.zero_index(1)) throw ConfigError("two_mode runs need an odd n_points on axis 2");
  propagator.validate(model);
  const double tf = double(propagator.n_steps) * propagator.dt;
  for (double t : snapshot_times)
    if (t < 0.0 || t > tf * (1 + 1e-12)) throw ConfigError("snapshot time outside the run window");
}

namespace {

double to_double(const std::string& key, const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) throw ConfigError(key + ": '" + s + "' is not a number");
  return v;
}

std::size_t to_size(const std::string& key, const std::string& s) {
  const double v = to_double(key, s);
  if (v < 0.0 || v != std::floor(v)) throw ConfigError(key + ": '" + s + "' is not a non-negative integer");
  return std::size_t(v);
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(key + ": '" + s + "' is not a boolean");
}

using Inputs = std::vector<std::string>;

const std::string& single(const std::string& key, const Inputs& in) {
  if (in.size() != 1) throw ConfigError(key + " takes a single value");
  return in.front();
}

std::vector<double> doubles(const std::string& key, const Inputs& in) {
  std::vector<double> v;
  for (const auto& s : in) v.push_back(to_double(key, s));
  if (v.empty()) throw ConfigError(key + " needs at least one value");
  return v;
}

struct Parser {
  RunConfig cfg;
  bool have_t_final = false, have_n_steps = false;
  double t_final = 0.0;
  std::set<std::string> seen;
  std::vector<std::pair<std::string, std::function<void(const std::string&, const Inputs&)>>> keys;

  Parser() {
    auto& c = cfg;
    add("RunConfig.mode", [&c](auto& k, auto& in) { c.mode = parse_run_mode(single(k, in)); });
    add("RunConfig.initial_state", [&c](auto& k, auto& in) { c.initial_state = parse_initial_state(single(k, in)); });
    add("RunConfig.output_dir", [&c](auto& k, auto& in) { c.output_dir = single(k, in); });
    add("RunConfig.snapshot_times", [&c](auto& k, auto& in) {
      c.snapshot_times.clear();
      for (const auto& s : in) c.snapshot_times.push_back(to_double(k, s));
    });
    add("RunConfig.debug", [&c](auto& k, auto& in) { c.debug = to_bool(k, single(k, in)); });
    add("ModelParams.omega0", [&c](auto& k, auto& in) { c.model.omega0 = to_double(k, single(k, in)); });
    add("ModelParams.mode_freqs", [&c](auto& k, auto& in) { c.model.mode_freqs = doubles(k, in); });
    add("ModelParams.couplings", [&c](auto& k, auto& in) { c.model.couplings = doubles(k, in); });
    add("QGrid.half_width", [&c](auto& k, auto& in) { c.half_width = doubles(k, in); });
    add("QGrid.n_points", [&c](auto& k, auto& in) {
      c.n_points.clear();
      for (const auto& s : in) c.n_points.push_back(to_size(k, s));
    });
    add("PropagatorConfig.dt", [&c](auto& k, auto& in) { c.propagator.dt = to_double(k, single(k, in)); });
    add("PropagatorConfig.n_steps", [this](auto& k, auto& in) {
      cfg.propagator.n_steps = to_size(k, single(k, in));
      have_n_steps = true;
    });
    add("PropagatorConfig.t_final", [this](auto& k, auto& in) {
      t_final = to_double(k, single(k, in));
      have_t_final = true;
    });
    add("PropagatorConfig.save_stride", [&c](auto& k, auto& in) { c.propagator.save_stride = to_size(k, single(k, in)); });
    add("PropagatorConfig.method", [&c](auto& k, auto& in) { c.propagator.method = parse_method(single(k, in)); });
    add("WWModeSet.coupling", [&c](auto& k, auto& in) { c.ww.coupling = to_double(k, single(k, in)); });
    add("WWModeSet.cross_section_freq", [&c](auto& k, auto& in) { c.ww.cross_section_freq = to_double(k, single(k, in)); });
    add("WWModeSet.spacing_ratio", [&c](auto& k, auto& in) { c.ww.spacing_ratio = to_double(k, single(k, in)); });
    add("WWModeSet.band", [&c](auto& k, auto& in) { c.ww.band = to_double(k, single(k, in)); });
    add("WWModeSet.spacing", [&c](auto& k, auto& in) { c.ww.spacing = to_double(k, single(k, in)); });
    add("WWModeSet.solver", [&c](auto& k, auto& in) { c.ww.solver = single(k, in); });
    add("WWModeSet.t_final", [&c](auto& k, auto& in) { c.ww.t_final = to_double(k, single(k, in)); });
    add("WWModeSet.n_frames", [&c](auto& k, auto& in) { c.ww.n_frames = to_size(k, single(k, in)); });
  }

  void add(const std::string& k, std::function<void(const std::string&, const Inputs&)> f) {
    keys.emplace_back(k, std::move(f));
  }

  void set(const std::string& key, const Inputs& in) {
    for (auto& [k, f] : keys) {
      if (k == key) {
        f(key, in);
        seen.insert(key);
        return;
      }
    }
    throw ConfigError("unknown config key '" + key + "'");
  }

  RunConfig finish() {
    if (have_t_final && have_n_steps) throw ConfigError("give either PropagatorConfig.t_final or n_steps, not both");
    if (have_t_final) {
      if (!(cfg.propagator.dt > 0.0)) throw ConfigError("dt must be positive");
      cfg.propagator.n_steps = std::size_t(std::llround(t_final / cfg.propagator.dt));
      seen.insert("PropagatorConfig.n_steps");
    }
    for (auto& [k, f] : keys)
      if (!seen.count(k) && k != "PropagatorConfig.t_final") cfg.defaulted.push_back(k);
    cfg.validate();
    return cfg;
  }
};

Inputs split_list(const std::string& v) {
  Inputs out;
  std::string cur;
  std::istringstream is(v);
  while (std::getline(is, cur, ',')) {
    const auto b = cur.find_first_not_of(" \t[");
    const auto e = cur.find_last_not_of(" \t]");
    if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  Parser p;
  std::istringstream is(text);
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_config(is);
  } catch (const CLI::Error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  for (const auto& it : items) {
    if (it.name == "++" || it.name == "--") continue;
    if (it.parents.size() != 1) throw ConfigError("config key '" + it.name + "' must sit inside a section");
    p.set(it.parents.front() + "." + it.name, it.inputs);
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + o + "' is not Section.key=value");
    p.set(o.substr(0, eq), split_list(o.substr(eq + 1)));
  }
  return p.finish();
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

namespace {
template <class T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_floating_point_v<T>)
      s += format_number(v[i]);
    else
      s += std::to_string(v[i]);
  }
  return s;
}
}  // namespace

std::string emit_config(const RunConfig& c) {
  std::ostringstream os;
  os << "[RunConfig]\n"
     << "mode = " << to_string(c.mode) << "\n"
     << "initial_state = " << to_string(c.initial_state) << "\n"
     << "output_dir = \"" << c.output_dir << "\"\n"
     << "snapshot_times = " << join(c.snapshot_times) << "\n"
     << "debug = " << (c.debug ? "true" : "false") << "\n\n"
     << "[ModelParams]\n"
     << "omega0 = " << format_number(c.model.omega0) << "\n"
     << "mode_freqs = " << join(c.model.mode_freqs) << "\n"
     << "couplings = " << join(c.model.couplings) << "\n\n"
     << "[QGrid]\n"
     << "half_width = " << join(c.half_width) << "\n"
     << "n_points = " << join(c.n_points) << "\n\n"
     << "[PropagatorConfig]\n"
     << "dt = " << format_number(c.propagator.dt) << "\n"
     << "n_steps = " << c.propagator.n_steps << "\n"
     << "save_stride = " << c.propagator.save_stride << "\n"
     << "method = " << to_string(c.propagator.method) << "\n\n"
     << "[WWModeSet]\n"
     << "coupling = " << format_number(c.ww.coupling) << "\n"
     << "cross_section_freq = " << format_number(c.ww.cross_section_freq) << "\n"
     << "spacing_ratio = " << format_number(c.ww.spacing_ratio) << "\n"
     << "band = " << format_number(c.ww.band) << "\n"
     << "spacing = " << format_number(c.ww.spacing) << "\n"
     << "solver = " << c.ww.solver << "\n"
     << "t_final = " << format_number(c.ww.t_final) << "\n"
     << "n_frames = " << c.ww.n_frames << "\n";
  return os.str();
}

namespace {

std::string single_mode_preset(const std::string& name, const std::string& dl, const std::string& init) {
  return "[RunConfig]\nmode = single_mode\ninitial_state = " + init + "\noutput_dir = " + name +
         "\nsnapshot_times = 0, 250, 500, 1000, 2000\n\n"
         "[ModelParams]\nomega0 = 0.4\nmode_freqs = 0.4\ncouplings = " + dl + "\n\n"
         "[QGrid]\nhalf_width = 20\nn_points = 513\n\n"
         "[PropagatorConfig]\ndt = 0.005\nt_final = 2000\nsave_stride = 1000\nmethod = split_operator\n";
}

std::string ww_preset(const std::string& name, const std::string& wi) {
  return "[RunConfig]\nmode = wigner_weisskopf\noutput_dir = " + name +
         "\n# in units of 1/gamma\nsnapshot_times = 0, 1, 2, 5, 10\n\n"
         "[ModelParams]\nomega0 = 0.4\n\n"
         "[QGrid]\nhalf_width = 20\nn_points = 513\n\n"
         "[WWModeSet]\ncoupling = 0.01\ncross_section_freq = " + wi +
         "\nsolver = closed_form\nt_final = 12\nn_frames = 241\n";
}

const std::vector<std::pair<std::string, std::function<std::string()>>>& presets() {
  static const std::vector<std::pair<std::string, std::function<std::string()>>> p = [] {
    std::vector<std::pair<std::string, std::function<std::string()>>> v;
    for (const char* dl : {"0.01", "0.1", "0.4"}) {
      for (const char* init : {"qbo", "factorized"}) {
        const std::string name = std::string("single_dl") + dl + "_" + init;
        const std::string state = std::string(init) + "_excited";
        const std::string d = dl;
        v.emplace_back(name, [name, d, state] { return single_mode_preset(name, d, state); });
      }
    }
    v.emplace_back("ww_on_resonance", [] { return ww_preset("ww_on_resonance", "0.4"); });
    v.emplace_back("ww_off_resonance", [] { return ww_preset("ww_off_resonance", "0.411"); });
    v.emplace_back("two_mode_smoke", [] {
      return std::string(
          "[RunConfig]\nmode = two_mode\ninitial_state = qbo_excited\noutput_dir = two_mode_smoke\n"
          "snapshot_times = 0, 50, 100\n\n"
          "[ModelParams]\nomega0 = 0.4\nmode_freqs = 0.4, 0.45\ncouplings = 0.05, 0.05\n\n"
          "[QGrid]\nhalf_width = 10, 10\nn_points = 81, 81\n\n"
          "[PropagatorConfig]\ndt = 0.005\nt_final = 100\nsave_stride = 200\nmethod = split_operator\n");
    });
    v.emplace_back("zero_coupling", [] {
      return std::string(
          "[RunConfig]\nmode = single_mode\ninitial_state = factorized_excited\noutput_dir = zero_coupling\n"
          "snapshot_times = 0, 100, 200\n\n"
          "[ModelParams]\nomega0 = 0.4\nmode_freqs = 0.4\ncouplings = 0\n\n"
          "[QGrid]\nhalf_width = 20\nn_points = 513\n\n"
          "[PropagatorConfig]\ndt = 0.005\nt_final = 200\nsave_stride = 200\nmethod = split_operator\n");
    });
    return v;
  }();
  return p;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> n;
  for (const auto& [k, f] : presets()) n.push_back(k);
  return n;
}

std::string preset_text(const std::string& name) {
  for (const auto& [k, f] : presets())
    if (k == name) return f();
  throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace photonef
