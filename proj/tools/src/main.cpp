#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "specbgk/error.hpp"
#include "specbgk_cli/config.hpp"
#include "specbgk_cli/runner.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral solver for the linear BGK equation with confining potential"};
  std::string config_path, preset_name, out_dir = "out", sweep, dump_name;
  bool list = false;
  auto* cfg = app.add_option("--config", config_path, "run configuration (flat YAML)")->check(CLI::ExistingFile);
  app.add_option("--preset", preset_name, "built-in experiment")->excludes(cfg);
  app.add_option("--out-dir", out_dir, "directory for CSV artifacts");
  app.add_option("--sweep", sweep, "param=v1,v2,... (K, N, dt or T); one run per value");
  app.add_option("--dump-preset", dump_name, "print a preset's full configuration and exit");
  app.add_flag("--list-presets", list, "print preset names and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kConfigError;
  }

  using namespace specbgk::cli;
  try {
    if (list) {
      for (const auto& n : preset_names()) std::cout << n << '\n';
      return 0;
    }
    if (!dump_name.empty()) {
      std::cout << dump_config(preset(dump_name));
      return 0;
    }
    if (config_path.empty() && preset_name.empty()) throw ConfigError("--config", "give --config or --preset");

    RunConfig c = config_path.empty() ? preset(preset_name) : load_config(config_path);
    if (!sweep.empty()) c.sweep = sweep;
    validate(c);

    for (const auto& s : run_all(c, out_dir)) std::cout << summary_line(s) << '\n';
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const specbgk::Error& e) {
    std::cerr << "numerical failure (" << specbgk::to_string(e.kind()) << "): " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
