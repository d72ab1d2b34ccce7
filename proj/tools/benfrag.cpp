#include "benfrag/errors.hpp"
#include "benfrag/experiment.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace {

enum Exit : int
{
  ok = 0,
  config_error = 2,
  numerical_error = 3,
  io_error = 4,
};

std::size_t workers_from_env()
{
  const char* env = std::getenv("BENFRAG_WORKERS");
  if (!env || !*env)
    return 1;
  try {
    return static_cast<std::size_t>(std::stoull(env));
  } catch (const std::exception&) {
    throw benfrag::ConfigError("BENFRAG_WORKERS must be a non-negative integer");
  }
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{ "Box-fragmentation simulator and Benford checker" };
  app.set_version_flag("--version", benfrag::kVersion);

  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> workers;
  std::optional<std::string> out;
  std::optional<std::string> format;

  app.add_option("command", command, "simulate|conformance|wafer|charfn|mellin|maxside|branching")
    ->required()
    ->check(CLI::IsMember({ "simulate", "conformance", "wafer", "charfn", "mellin", "maxside", "branching" }));
  app.add_option("--config", config_path, "JSON experiment config")->required();
  app.add_option("--seed", seed, "master seed");
  app.add_option("--trials", trials, "number of trials or trees");
  app.add_option("--out", out, "result path; the manifest goes to <out>.manifest.json");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({ "csv", "json" }));
  app.add_option("--workers", workers, "worker threads, 0 = all cores (default: $BENFRAG_WORKERS or 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return config_error;
  }

  try {
    benfrag::ExperimentConfig cfg = benfrag::load_config(config_path);
    cfg.command = benfrag::parse_command(command);
    cfg.workers = workers.value_or(workers_from_env());
    if (seed)
      cfg.seed = *seed;
    if (trials)
      cfg.trials = *trials;
    if (out)
      cfg.output_path = *out;
    if (format)
      cfg.output_format = *format;

    const auto violations = benfrag::validate(cfg);
    if (!violations.empty()) {
      for (const auto& v : violations)
        std::cerr << "config error: " << v << '\n';
      return config_error;
    }

    const benfrag::RunManifest manifest = benfrag::run(cfg);
    for (const auto& r : manifest.results)
      std::cout << r.sha256 << "  " << r.path << '\n';
    std::printf("%s finished in %.3f s\n", command.c_str(), manifest.wall_clock_seconds);
    return ok;
  } catch (const benfrag::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const benfrag::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return numerical_error;
  } catch (const benfrag::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return io_error;
  }
}
