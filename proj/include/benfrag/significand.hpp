#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace benfrag {

/// x - floor(x), kept strictly below 1 when rounding would produce 1.
double fractional_log(double log_value);

/// S_B(x) = B^{frac(log_B x)} in [1, B). Throws ConfigError on non-finite input.
double significand_from_log(double log_value, double base);

/// log_B(D) for D in [1, B]: the Benford significand CDF.
double benford_cdf(double significand, double base);

/// Leading decimal digit (1..9) of a value given by its log10.
int first_digit_from_log10(double log10_value);

/// Base-B logs of positive quantities with their cached fractional parts.
class SignificandSample
{
public:
  SignificandSample(std::vector<double> log_values, double base);

  double base() const noexcept { return base_; }
  std::size_t size() const noexcept { return log_values_.size(); }
  std::span<const double> log_values() const noexcept { return log_values_; }
  /// frac(log_B x) for every value, each in [0, 1).
  std::span<const double> fractional_parts() const noexcept { return fractions_; }
  std::vector<double> significands() const;

private:
  double base_;
  std::vector<double> log_values_;
  std::vector<double> fractions_;
};

struct BenfordReport
{
  double ks_distance = 0.0;
  /// First-digit statistics exist only for base 10.
  std::optional<double> chi2_first_digit;
  std::optional<std::array<double, 9>> digit_frequencies;
  std::optional<double> mad_digits;
  std::size_t sample_size = 0;
  double base = 10.0;
};

/// One-sample Kolmogorov-Smirnov distance of values in [0, 1) against the
/// uniform law: max over sorted points of i/N - u_(i) and u_(i) - (i-1)/N.
double ks_distance_uniform(std::span<const double> unit_values);

/// Benford first-digit probabilities log10(1 + 1/d), d = 1..9.
std::array<double, 9> benford_digit_probabilities();

/// Digit counts of a base-10 sample. Throws ConfigError for other bases.
std::array<std::uint64_t, 9> first_digit_counts(const SignificandSample& sample);

/// Pearson chi-square of (possibly fractional) digit counts against Benford.
double first_digit_chi2(std::span<const double, 9> counts);

/// Mean absolute deviation of digit frequencies from Benford.
double digit_mad(std::span<const double, 9> frequencies);

/// Chi-square of a sample. Throws ConfigError unless the base is 10.
double first_digit_chi2(const SignificandSample& sample);

/// KS distance of the significand CDF against log_B D, plus first-digit
/// chi-square and MAD in base 10. Requires a non-empty sample.
BenfordReport conformance(const SignificandSample& sample);

} // namespace benfrag
