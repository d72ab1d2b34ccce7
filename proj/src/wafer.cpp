#include "benfrag/wafer.hpp"

#include "benfrag/errors.hpp"
#include "benfrag/fragmentation.hpp"
#include "benfrag/frame.hpp"
#include "benfrag/parallel.hpp"
#include "benfrag/significand.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace benfrag {

namespace {

struct Observation
{
  double excess = 0.0;  // v_d / max - 1
  double log_max = 0.0;
  double gap = 0.0;
};

void throw_if_invalid(const std::vector<std::string>& v)
{
  if (v.empty())
    return;
  std::string msg = v.front();
  for (std::size_t i = 1; i < v.size(); ++i)
    msg += "; " + v[i];
  throw ConfigError(msg);
}

// observations[trial][k] is trial `trial` observed at steps[k].
std::vector<std::vector<Observation>> observe(const WaferConfig& cfg, std::span<const std::size_t> steps)
{
  const std::span<const ProportionDistribution> laws(&cfg.dist, 1);
  return parallel_map(cfg.trials, cfg.workers, [&](std::size_t trial) {
    Engine rng = make_stream(cfg.seed, trial);
    LogBox box{ cfg.initial_log_sides.empty() ? std::vector<double>(cfg.m, 0.0) : cfg.initial_log_sides, 0 };
    std::vector<Observation> obs;
    obs.reserve(steps.size());
    for (std::size_t n : steps) {
      advance_linear(box, laws, n - box.step, rng);
      const FrameVolumes fv = frame_volumes(box, cfg.d, cfg.base, false);
      obs.push_back(Observation{ fv.wafer_excess(), fv.log_max, fv.gap });
    }
    return obs;
  });
}

double overflow_threshold(double delta, double base)
{
  return 1.0 - std::log1p(delta) / std::log(base);
}

WaferRow summarize(const WaferConfig& cfg,
                   const std::vector<std::vector<Observation>>& obs,
                   std::size_t k,
                   std::size_t n)
{
  WaferRow row;
  row.n = n;
  row.delta = delta_at(cfg, n);
  row.alpha_n = alpha_threshold(row.delta, cfg.m, cfg.d, cfg.base);
  row.trials = cfg.trials;
  row.seed = cfg.seed;

  const double overflow_at = overflow_threshold(row.delta, cfg.base);
  std::size_t wafer = 0, overflow = 0, above = 0;
  std::vector<double> gaps;
  gaps.reserve(obs.size());
  for (const auto& trial : obs) {
    const Observation& o = trial[k];
    wafer += o.excess <= row.delta ? 1 : 0;
    overflow += fractional_log(o.log_max) >= overflow_at ? 1 : 0;
    above += o.gap >= row.alpha_n ? 1 : 0;
    gaps.push_back(o.gap);
  }
  const double t = static_cast<double>(obs.size());
  row.p_wafer = static_cast<double>(wafer) / t;
  row.p_overflow = static_cast<double>(overflow) / t;
  row.p_gap_above_alpha = static_cast<double>(above) / t;
  row.min_gap = *std::min_element(gaps.begin(), gaps.end());
  row.mean_gap = std::isinf(row.min_gap) ? row.min_gap : pairwise_sum(gaps) / t;
  row.median_gap = quantile(std::move(gaps), 0.5);
  return row;
}

} // namespace

std::vector<std::string> validate(const WaferConfig& cfg, bool strict_delta)
{
  std::vector<std::string> v;
  if (cfg.m == 0)
    v.emplace_back("m must be >= 1");
  if (cfg.d == 0)
    v.emplace_back("d must be >= 1");
  if (cfg.d > cfg.m)
    v.emplace_back("d exceeds m");
  if (cfg.m > 32)
    v.emplace_back("m must be <= 32");
  if (cfg.trials == 0)
    v.emplace_back("trials must be >= 1");
  if (!(cfg.base > 1.0) || !std::isfinite(cfg.base))
    v.emplace_back("base must be > 1");
  if (cfg.dist.base() != cfg.base)
    v.emplace_back("distribution base differs from the analysis base");
  if (cfg.schedule == DeltaSchedule::fixed) {
    if (strict_delta && !(cfg.delta > 0.0 && cfg.delta < 1.0))
      v.emplace_back("delta must lie in (0, 1)");
    if (!strict_delta && !(cfg.delta >= 0.0 && std::isfinite(cfg.delta)))
      v.emplace_back("delta must be >= 0");
  }
  if (!cfg.initial_log_sides.empty() && cfg.initial_log_sides.size() != cfg.m)
    v.emplace_back("initial_log_sides must have m entries");
  return v;
}

double delta_at(const WaferConfig& cfg, std::size_t n)
{
  if (cfg.schedule == DeltaSchedule::fixed)
    return cfg.delta;
  return std::exp(-std::pow(static_cast<double>(n), 0.25));
}

double alpha_threshold(double delta, std::size_t m, std::size_t d, double base)
{
  return log_binomial(m, d, base) - std::log(delta) / std::log(base);
}

WaferReport wafer_decay(const WaferConfig& cfg, std::span<const std::size_t> steps)
{
  throw_if_invalid(validate(cfg));
  if (steps.empty() || !std::is_sorted(steps.begin(), steps.end()))
    throw ConfigError("wafer step list must be non-empty and ascending");

  const auto obs = observe(cfg, steps);
  WaferReport report;
  for (std::size_t k = 0; k < steps.size(); ++k)
    report.decay_table.push_back(summarize(cfg, obs, k, steps[k]));
  report.summary = report.decay_table.back();
  return report;
}

WaferReport wafer_probability(const WaferConfig& cfg)
{
  const std::size_t n = cfg.n_steps;
  return wafer_decay(cfg, std::span<const std::size_t>(&n, 1));
}

DecayFit fit_decay_slope(std::span<const WaferRow> rows)
{
  if (rows.size() < 2)
    throw ConfigError("decay fit needs at least two rows");
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    if (!(r.p_wafer < 1.0))
      throw NumericalError("decay fit: every trial was a wafer at n = " + std::to_string(r.n));
    xs.push_back(std::log(static_cast<double>(r.n)));
    ys.push_back(std::log(1.0 - r.p_wafer));
  }
  const double k = static_cast<double>(xs.size());
  const double mx = pairwise_sum(xs) / k;
  const double my = pairwise_sum(ys) / k;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  DecayFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

GapDistribution gap_distribution(const WaferConfig& cfg)
{
  throw_if_invalid(validate(cfg));
  if (cfg.d == cfg.m)
    throw ConfigError("gap undefined for d = m");

  const std::size_t n = cfg.n_steps;
  const auto obs = observe(cfg, std::span<const std::size_t>(&n, 1));
  GapDistribution out;
  out.gaps.reserve(obs.size());
  for (const auto& trial : obs)
    out.gaps.push_back(trial.front().gap);

  out.alpha_n = alpha_threshold(delta_at(cfg, n), cfg.m, cfg.d, cfg.base);
  const double t = static_cast<double>(out.gaps.size());
  out.mean = pairwise_sum(out.gaps) / t;
  out.min = *std::min_element(out.gaps.begin(), out.gaps.end());
  out.p_gap_above_alpha =
    static_cast<double>(std::count_if(out.gaps.begin(), out.gaps.end(), [&](double g) { return g >= out.alpha_n; })) /
    t;
  std::vector<double> sorted = out.gaps;
  std::sort(sorted.begin(), sorted.end());
  out.q10 = quantile(sorted, 0.10);
  out.q25 = quantile(sorted, 0.25);
  out.median = quantile(sorted, 0.50);
  out.q75 = quantile(sorted, 0.75);
  out.q90 = quantile(sorted, 0.90);
  return out;
}

double overflow_probability(const WaferConfig& cfg)
{
  throw_if_invalid(validate(cfg, false));
  const std::size_t n = cfg.n_steps;
  const auto obs = observe(cfg, std::span<const std::size_t>(&n, 1));
  const double threshold = overflow_threshold(delta_at(cfg, n), cfg.base);
  std::size_t hits = 0;
  for (const auto& trial : obs)
    hits += fractional_log(trial.front().log_max) >= threshold ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(obs.size());
}

double quantile(std::vector<double> values, double q)
{
  if (values.empty())
    throw ConfigError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double w = pos - static_cast<double>(lo);
  if (w == 0.0 || values[lo] == values[hi])
    return values[lo];
  return values[lo] + w * (values[hi] - values[lo]);
}

} // namespace benfrag
