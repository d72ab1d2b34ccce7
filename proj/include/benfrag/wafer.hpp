#pragma once

#include "benfrag/distributions.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace benfrag {

enum class DeltaSchedule
{
  fixed,    ///< delta_n = delta
  decaying, ///< delta_n = exp(-n^{1/4})
};

struct WaferConfig
{
  std::size_t m = 3;
  std::size_t d = 1;
  std::size_t n_steps = 100;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  DeltaSchedule schedule = DeltaSchedule::fixed;
  double delta = 1e-3;
  double base = 10.0;
  ProportionDistribution dist = ProportionDistribution::log_uniform(-1.0, 0.0);
  std::vector<double> initial_log_sides;
  std::size_t workers = 1;
};

/// Violations of the configuration. With `strict_delta` a fixed delta must
/// lie in (0, 1); otherwise any delta >= 0 is accepted (overflow analysis).
std::vector<std::string> validate(const WaferConfig& cfg, bool strict_delta = true);

/// delta_n for the configured schedule.
double delta_at(const WaferConfig& cfg, std::size_t n);

/// -log_B(delta / C(m, d)): the gap above which a trial is certainly a
/// delta-wafer.
double alpha_threshold(double delta, std::size_t m, std::size_t d, double base);

struct WaferRow
{
  std::size_t n = 0;
  double delta = 0.0;
  double p_wafer = 0.0;   ///< fraction with max <= v_d <= (1 + delta) max
  double p_overflow = 0.0; ///< fraction with (1 + delta) S_B(max) >= B
  double mean_gap = 0.0;
  double median_gap = 0.0;
  double min_gap = 0.0;
  double alpha_n = 0.0;
  double p_gap_above_alpha = 0.0; ///< fraction with gap >= alpha_n
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

struct WaferReport
{
  WaferRow summary;                ///< at cfg.n_steps
  std::vector<WaferRow> decay_table; ///< one row per requested n
};

/// Monte Carlo over `trials` independent linear trajectories; row at n_steps.
WaferReport wafer_probability(const WaferConfig& cfg);

/// Same trials observed at every n in `steps` (ascending, coupled along each
/// trajectory). cfg.n_steps is ignored.
WaferReport wafer_decay(const WaferConfig& cfg, std::span<const std::size_t> steps);

struct DecayFit
{
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares fit of log(1 - p_wafer) against log n. Rows with
/// p_wafer == 1 carry no information and are rejected.
DecayFit fit_decay_slope(std::span<const WaferRow> rows);

struct GapDistribution
{
  std::vector<double> gaps; ///< per trial, trial order
  double mean = 0.0;
  double min = 0.0;
  double q10 = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double q90 = 0.0;
  double alpha_n = 0.0;
  double p_gap_above_alpha = 0.0;
};

/// Gap statistic of the frame volumes at n_steps for every trial. Throws
/// ConfigError when d == m (a single subset has no runner-up).
GapDistribution gap_distribution(const WaferConfig& cfg);

/// Fraction of trials where (1 + delta_n) S_B(max) >= B. Accepts any
/// delta >= 0.
double overflow_probability(const WaferConfig& cfg);

/// Empirical quantile (linear interpolation between order statistics).
double quantile(std::vector<double> values, double q);

} // namespace benfrag
