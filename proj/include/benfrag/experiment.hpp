#pragma once

#include "benfrag/distributions.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace benfrag {

inline constexpr const char* kVersion = "0.1.0";

enum class Command
{
  simulate,
  conformance,
  wafer,
  charfn,
  mellin,
  maxside,
  branching,
};

std::string to_string(Command c);
Command parse_command(std::string_view name);

/// Proportion law as written in a config file. `family` is one of
/// "uniform", "loguniform", "normalized_loguniform" or "beta".
struct DistributionSpec
{
  std::string family = "uniform";
  double a = -1.0;
  double b = 0.0;
  double alpha = 1.0;
  double beta = 1.0;

  bool operator==(const DistributionSpec&) const = default;
};

ProportionDistribution make_distribution(const DistributionSpec& spec, double base);

struct ExperimentConfig
{
  Command command = Command::conformance;
  std::string mode = "linear"; ///< linear | branching
  std::size_t m = 2;
  std::size_t d = 1;
  std::size_t n = 50;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  double base = 10.0;
  bool streaming = false;

  DistributionSpec distribution;
  std::vector<DistributionSpec> axis_distributions;
  bool allow_heterogeneous = false;
  std::vector<double> initial_log_sides;

  std::string delta_schedule = "fixed"; ///< fixed | decaying
  double delta = 1e-3;
  std::vector<std::size_t> n_values;

  double epsilon = 0.1;
  double k_max = 0.0; ///< 0 selects min(sqrt(3n), 40)
  double x_min = -6.0;
  double x_max = 6.0;
  double x_step = 0.05;

  int ell_max = 50;
  std::string mellin_grid = "original"; ///< original | char_fn

  double window_a = 0.0;
  double window_b = 0.30102999566398120;

  std::vector<double> s_values{ 2.0, 5.0 };
  bool dump_significands = false;

  std::string output_path = "benfrag_result.csv";
  std::string output_format = "csv"; ///< csv | json
  std::size_t workers = 1;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses the JSON config schema. Missing keys keep their defaults; unknown
/// keys and malformed values raise ConfigError.
ExperimentConfig config_from_json(std::string_view text);
std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

/// Every violated constraint. Never throws.
std::vector<std::string> validate(const ExperimentConfig& cfg);

struct StageTiming
{
  std::string stage;
  double seconds = 0.0;
};

struct ResultFile
{
  std::string path;
  std::string sha256;
};

struct RunManifest
{
  ExperimentConfig config;
  std::string version = kVersion;
  double wall_clock_seconds = 0.0;
  std::vector<StageTiming> stages;
  std::uint64_t seed = 0;
  std::vector<ResultFile> results;
};

std::string manifest_to_json(const RunManifest& manifest);

/// Result document of an experiment, rendered in the configured format.
std::string render_result(const ExperimentConfig& cfg);

/// Validates, runs, writes the result file(s) and `<out>.manifest.json`.
/// Throws ConfigError, NumericalError or IoError.
RunManifest run(const ExperimentConfig& cfg);

std::string sha256_hex(std::string_view bytes);

} // namespace benfrag
