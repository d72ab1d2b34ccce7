#include "benfrag/significand.hpp"

#include "benfrag/errors.hpp"

#include <algorithm>
#include <cmath>

namespace benfrag {

double fractional_log(double log_value)
{
  const double u = log_value - std::floor(log_value);
  // -1e-20 - floor(-1e-20) rounds to exactly 1.
  return u < 1.0 ? u : std::nextafter(1.0, 0.0);
}

double significand_from_log(double log_value, double base)
{
  if (!std::isfinite(log_value))
    throw NumericalError("significand of a non-finite log-value");
  return std::pow(base, fractional_log(log_value));
}

double benford_cdf(double significand, double base)
{
  if (!(significand >= 1.0 && significand <= base))
    throw ConfigError("benford_cdf argument outside [1, B]");
  if (significand == base)
    return 1.0;
  return std::log(significand) / std::log(base);
}

int first_digit_from_log10(double log10_value)
{
  const int digit = static_cast<int>(std::pow(10.0, fractional_log(log10_value)));
  return std::clamp(digit, 1, 9);
}

SignificandSample::SignificandSample(std::vector<double> log_values, double base)
  : base_(base)
  , log_values_(std::move(log_values))
{
  if (!std::isfinite(base_) || base_ <= 1.0)
    throw ConfigError("significand base must be > 1");
  fractions_.reserve(log_values_.size());
  for (double v : log_values_) {
    if (!std::isfinite(v))
      throw NumericalError("significand sample contains a non-finite log-value");
    fractions_.push_back(fractional_log(v));
  }
}

std::vector<double> SignificandSample::significands() const
{
  std::vector<double> out;
  out.reserve(fractions_.size());
  for (double u : fractions_)
    out.push_back(std::pow(base_, u));
  return out;
}

double ks_distance_uniform(std::span<const double> unit_values)
{
  std::vector<double> sorted(unit_values.begin(), unit_values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double above = static_cast<double>(i + 1) / n - sorted[i];
    const double below = sorted[i] - static_cast<double>(i) / n;
    d = std::max({ d, above, below });
  }
  return std::min(d, 1.0);
}

std::array<double, 9> benford_digit_probabilities()
{
  std::array<double, 9> p{};
  for (int d = 1; d <= 9; ++d)
    p[d - 1] = std::log10(1.0 + 1.0 / d);
  return p;
}

std::array<std::uint64_t, 9> first_digit_counts(const SignificandSample& sample)
{
  if (sample.base() != 10.0)
    throw ConfigError("first-digit statistics are defined for base 10 only");
  std::array<std::uint64_t, 9> counts{};
  for (double v : sample.log_values())
    ++counts[first_digit_from_log10(v) - 1];
  return counts;
}

double first_digit_chi2(std::span<const double, 9> counts)
{
  double total = 0.0;
  for (double c : counts)
    total += c;
  if (total <= 0.0)
    throw ConfigError("chi-square of an empty sample");
  const auto p = benford_digit_probabilities();
  double chi2 = 0.0;
  for (std::size_t i = 0; i < 9; ++i) {
    const double expected = total * p[i];
    const double diff = counts[i] - expected;
    chi2 += diff * diff / expected;
  }
  return chi2;
}

double digit_mad(std::span<const double, 9> frequencies)
{
  const auto p = benford_digit_probabilities();
  double mad = 0.0;
  for (std::size_t i = 0; i < 9; ++i)
    mad += std::abs(frequencies[i] - p[i]);
  return mad / 9.0;
}

double first_digit_chi2(const SignificandSample& sample)
{
  const auto counts = first_digit_counts(sample);
  std::array<double, 9> real_counts{};
  std::copy(counts.begin(), counts.end(), real_counts.begin());
  return first_digit_chi2(real_counts);
}

BenfordReport conformance(const SignificandSample& sample)
{
  if (sample.size() == 0)
    throw ConfigError("conformance requires a non-empty sample");

  BenfordReport report;
  report.sample_size = sample.size();
  report.base = sample.base();
  // log_B of the significand is the fractional part, so the significand CDF
  // against log_B D is the uniform KS statistic of the fractional parts.
  report.ks_distance = ks_distance_uniform(sample.fractional_parts());

  if (sample.base() == 10.0) {
    const auto counts = first_digit_counts(sample);
    std::array<double, 9> real_counts{};
    std::array<double, 9> freq{};
    const double n = static_cast<double>(sample.size());
    for (std::size_t i = 0; i < 9; ++i) {
      real_counts[i] = static_cast<double>(counts[i]);
      freq[i] = real_counts[i] / n;
    }
    report.chi2_first_digit = first_digit_chi2(real_counts);
    report.digit_frequencies = freq;
    report.mad_digits = digit_mad(freq);
  }
  return report;
}

} // namespace benfrag
