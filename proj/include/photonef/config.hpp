#pragma once

#include <map>
#include <string>
#include <vector>

#include "photonef/model.hpp"
#include "photonef/propagator.hpp"

namespace photonef {

enum class RunMode { single_mode, two_mode, wigner_weisskopf };

RunMode parse_run_mode(const std::string& s);
std::string to_string(RunMode m);

struct WWRunConfig {
  double coupling = 0.01;
  double cross_section_freq = 0.4;
  double spacing_ratio = 10.0;
  double band = 30.0;
  // > 0 overrides the quasi-continuum spacing rule
  double spacing = 0.0;
  std::string solver = "closed_form";
  // in units of 1/gamma
  double t_final = 12.0;
  std::size_t n_frames = 241;
};

struct RunConfig {
  RunMode mode = RunMode::single_mode;
  InitialState initial_state = InitialState::qbo_excited;
  std::string output_dir = "out";
  // a.u. for grid runs, 1/gamma for wigner_weisskopf
  std::vector<double> snapshot_times{0.0};
  bool debug = false;

  ModelParams model;
  std::vector<double> half_width{20.0};
  std::vector<std::size_t> n_points{513};
  PropagatorConfig propagator;
  WWRunConfig ww;

  // "Section.key" names the file left at their default
  std::vector<std::string> defaulted;

  QGrid grid() const;
  void validate() const;
};

// INI text; unknown sections or keys throw ConfigError
RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

// resolved config as INI text (parseable by parse_config)
std::string emit_config(const RunConfig& cfg);

std::vector<std::string> preset_names();
std::string preset_text(const std::string& name);

}  // namespace photonef
