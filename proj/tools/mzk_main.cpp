#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "mzk/config.hpp"
#include "mzk/errors.hpp"
#include "mzk/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral laboratory for the 2D modified Zakharov-Kuznetsov equation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mzk::code_version());

  std::string config_path;
  std::string out_dir;
  std::optional<int> threads;

  for (const auto& name : mzk::kExperiments) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "experiment config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
    sub->add_option("--threads", threads, "worker threads (overrides MZK_THREADS)");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string experiment = app.get_subcommands().front()->get_name();

  try {
    mzk::RunConfig cfg = mzk::parse_config(config_path);
    if (!cfg.experiment.empty() && cfg.experiment != experiment)
      throw mzk::ConfigurationError("config selects experiment '" + cfg.experiment +
                                    "' but the '" + experiment + "' subcommand was given");
    cfg.experiment = experiment;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    cfg.threads = mzk::resolve_threads(threads, std::getenv("MZK_THREADS"), cfg.threads);

    const mzk::RunManifest m = mzk::run(cfg);
    std::cout << experiment << ": " << m.outcome << " (" << m.artifacts.size() << " artifacts in "
              << cfg.output_dir.string() << ")\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "mzk " << experiment << ": error: " << e.what() << "\n";
    return mzk::exit_code_for(std::current_exception());
  }
}
