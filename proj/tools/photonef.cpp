#include <CLI11.hpp>

#include <iostream>

#include "photonef/config.hpp"
#include "photonef/errors.hpp"
#include "photonef/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Exact-factorization dynamics of an emitter in a cavity"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  auto* run = app.add_subcommand("run", "run a config file");
  run->add_option("config", config_path, "INI config")->required();
  run->add_option("--override", overrides, "Section.key=value (repeatable)");

  auto* presets = app.add_subcommand("presets", "built-in configs");
  presets->require_subcommand(1);
  presets->add_subcommand("list", "print preset names");
  std::string preset;
  auto* emit = presets->add_subcommand("emit", "print a preset config");
  emit->add_option("name", preset)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      const photonef::RunConfig cfg = photonef::load_config(config_path, overrides);
      photonef::run(cfg);
      std::cout << "wrote " << cfg.output_dir << "\n";
    } else if (presets->got_subcommand("list")) {
      for (const auto& n : photonef::preset_names()) std::cout << n << "\n";
    } else {
      std::cout << photonef::preset_text(preset);
    }
  } catch (const photonef::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const photonef::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
