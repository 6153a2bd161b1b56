#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cho/app.hpp"
#include "cho/presets.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Optimal control of the Cahn-Hilliard-Oono system with dynamic boundary conditions"};
  app.require_subcommand(1);

  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "forward solve of one configuration");
  simulate->add_option("-c,--config", config_path, "INI configuration")->required();

  auto* optimize = app.add_subcommand("optimize", "projected-gradient optimal control");
  optimize->add_option("-c,--config", config_path, "INI configuration")->required();

  bool all_presets = false;
  auto* verify = app.add_subcommand("verify", "invariant checks of one configuration or all presets");
  auto* verify_config = verify->add_option("-c,--config", config_path, "INI configuration");
  verify->add_flag("--all-presets", all_presets, "run every built-in preset")
      ->excludes(verify_config);

  std::string preset_name;
  auto* show = app.add_subcommand("preset", "print a built-in configuration as INI");
  show->add_option("name", preset_name, "preset name")
      ->required()
      ->check(CLI::IsMember(cho::preset_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cho::exit_ok : cho::exit_config;
  }

  return cho::guarded(
      [&]() -> int {
        if (simulate->parsed()) {
          cho::run_simulate(cho::load_config(config_path), std::cout);
          return cho::exit_ok;
        }
        if (optimize->parsed()) {
          cho::run_optimize(cho::load_config(config_path), std::cout);
          return cho::exit_ok;
        }
        if (verify->parsed()) {
          std::vector<cho::RunConfig> configs;
          if (all_presets) {
            for (const auto& name : cho::preset_names()) configs.push_back(cho::preset(name));
          } else if (!config_path.empty()) {
            configs.push_back(cho::load_config(config_path));
          } else {
            throw cho::ConfigError("verify needs --config or --all-presets");
          }
          const auto reports = cho::run_verify(configs, std::cout);
          for (const auto& r : reports) {
            if (!r.pass()) return cho::exit_check_failed;
          }
          return cho::exit_ok;
        }
        std::cout << cho::serialize(cho::preset(preset_name));
        return cho::exit_ok;
      },
      std::cerr);
}
