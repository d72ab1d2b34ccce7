#pragma once

#include "benfrag/random.hpp"

#include <complex>
#include <cstddef>
#include <variant>

namespace benfrag {

/// P ~ Uniform(0, 1).
struct UniformUnit
{
  bool operator==(const UniformUnit&) const = default;
};

/// log_B P ~ Uniform(a, b).
struct LogUniform
{
  double a = -1.0;
  double b = 0.0;
  bool operator==(const LogUniform&) const = default;
};

/// P ~ Beta(alpha, beta).
struct Beta
{
  double alpha = 1.0;
  double beta = 1.0;
  bool operator==(const Beta&) const = default;
};

using Family = std::variant<UniformUnit, LogUniform, Beta>;

/// Moments of log_B P.
struct LogMoments
{
  double mu_p = 0.0;     ///< E[log_B P]
  double sigma_p2 = 0.0; ///< Var[log_B P]
  double rho3 = 0.0;     ///< E|log_B P - mu_p|^3
};

/// One proportion cut and its complement, both as base-B logs. Branching
/// trees keep both pieces of every cut.
struct LogCut
{
  double log_p = 0.0;
  double log_complement = 0.0;
};

/// A continuous proportion-cut law on (0, 1), sampled and analysed through
/// log_B P. Immutable after construction; log-moments are computed once.
class ProportionDistribution
{
public:
  static ProportionDistribution uniform_unit(double base = 10.0);
  /// Requires a < b <= 0.
  static ProportionDistribution log_uniform(double a, double b, double base = 10.0);
  /// log_B P ~ Uniform(-sqrt 3, sqrt 3): mean 0, variance 1. The "proportion"
  /// may exceed 1, so boxes built from it do not shrink monotonically and it
  /// cannot feed a branching tree.
  static ProportionDistribution normalized_log_uniform(double base = 10.0);
  static ProportionDistribution beta(double alpha, double beta, double base = 10.0);

  const Family& family() const noexcept { return family_; }
  double base() const noexcept { return base_; }
  double log_base() const noexcept { return log_base_; }
  bool is_normalized() const noexcept { return normalized_; }
  const LogMoments& log_moments() const noexcept { return moments_; }

  double sample_log(Engine& rng) const;
  LogCut sample_cut(Engine& rng) const;

  /// E[exp(i * omega * log_B P)]: the characteristic function of log_B P.
  /// Closed form for UniformUnit and LogUniform, quadrature for Beta. When
  /// `abs_error` is given it receives the quadrature error estimate (0 for
  /// closed forms).
  std::complex<double> log_char_fn(double omega, double* abs_error = nullptr) const;

  /// Density of log_B P at s.
  double log_density(double s) const;

  bool operator==(const ProportionDistribution& other) const
  {
    return family_ == other.family_ && base_ == other.base_ && normalized_ == other.normalized_;
  }

private:
  ProportionDistribution(Family family, double base, bool normalized);

  Family family_;
  double base_;
  double log_base_;
  bool normalized_;
  LogMoments moments_;
};

double sample_log(const ProportionDistribution& dist, Engine& rng);
LogMoments log_moments(const ProportionDistribution& dist);

/// Diagnostics for `char_fn_normalized`.
struct CharFnDiagnostics
{
  double abs_error = 0.0;
  bool reduced_precision = false;
};

/// Characteristic function of Z = (sum_{t<=n} log_B P_t - n mu) / (sqrt(n) sigma).
/// For LogUniform this is sinc(k sqrt(3/n))^n exactly.
std::complex<double> char_fn_normalized(const ProportionDistribution& dist,
                                        std::size_t n,
                                        double k,
                                        CharFnDiagnostics* diagnostics = nullptr);

/// sin(u)/u, 1 at the origin.
double sinc(double u);

} // namespace benfrag
