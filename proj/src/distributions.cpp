#include "benfrag/distributions.hpp"

#include "benfrag/errors.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace benfrag {

namespace {

constexpr double kMomentTolerance = 1e-10;

// Beta law seen through u = -ln P, so log_B P = -u / ln B and t = e^{-u}.
// h(u) = e^{-alpha u} (1 - e^{-u})^{beta - 1} / B(alpha, beta).
struct BetaLogDensity
{
  double alpha;
  double beta;
  double log_norm;

  explicit BetaLogDensity(const Beta& b)
    : alpha(b.alpha)
    , beta(b.beta)
    , log_norm(std::lgamma(b.alpha) + std::lgamma(b.beta) - std::lgamma(b.alpha + b.beta))
  {}

  double operator()(double u) const
  {
    if (u <= 0.0)
      return beta >= 1.0 ? (beta == 1.0 ? alpha : 0.0) : HUGE_VAL;
    const double log_h = -alpha * u + (beta - 1.0) * std::log(-std::expm1(-u)) - log_norm;
    return std::exp(log_h);
  }

  // Integration range beyond which h(u) * u^3 is negligible.
  double upper() const { return 60.0 / alpha + 40.0; }
};

LogMoments beta_log_moments(const Beta& b, double log_base)
{
  const BetaLogDensity h{ b };
  const double upper = h.upper();

  auto check = [](const detail::QuadratureResult& r, const char* what) {
    if (!(r.abs_error <= kMomentTolerance) || !std::isfinite(r.value))
      throw NumericalError(std::string("Beta log-moment quadrature did not converge (") + what + ")");
    return r.value;
  };

  const double mass = check(detail::integrate_half_line(h, upper, 1.0), "mass");
  if (std::abs(mass - 1.0) > kMomentTolerance)
    throw NumericalError("Beta log-density does not integrate to 1");

  const double mean_u =
    check(detail::integrate_half_line([&](double u) { return u * h(u); }, upper, 1.0), "mean");
  const std::array<double, 1> kink{ mean_u };
  const double var_u = check(detail::integrate_half_line(
                               [&](double u) { return (u - mean_u) * (u - mean_u) * h(u); }, upper, 1.0, kink),
                             "variance");
  const double abs3_u = check(detail::integrate_half_line(
                                [&](double u) {
                                  const double z = std::abs(u - mean_u);
                                  return z * z * z * h(u);
                                },
                                upper,
                                1.0,
                                kink),
                              "third moment");

  return LogMoments{ -mean_u / log_base,
                     var_u / (log_base * log_base),
                     abs3_u / (log_base * log_base * log_base) };
}

LogMoments closed_form_moments(const Family& family, double log_base)
{
  if (const auto* lu = std::get_if<LogUniform>(&family)) {
    const double w = lu->b - lu->a;
    return LogMoments{ 0.5 * (lu->a + lu->b), w * w / 12.0, w * w * w / 32.0 };
  }
  // -ln U ~ Exp(1): mean 1, variance 1, E|E - 1|^3 = 12/e - 2.
  const double l3 = log_base * log_base * log_base;
  return LogMoments{ -1.0 / log_base, 1.0 / (log_base * log_base), (12.0 / std::numbers::e - 2.0) / l3 };
}

} // namespace

ProportionDistribution::ProportionDistribution(Family family, double base, bool normalized)
  : family_(family)
  , base_(base)
  , log_base_(std::log(base))
  , normalized_(normalized)
{
  if (!std::isfinite(base) || base <= 1.0)
    throw ConfigError("base must be a finite real > 1");

  if (const auto* lu = std::get_if<LogUniform>(&family_)) {
    if (!std::isfinite(lu->a) || !std::isfinite(lu->b) || !(lu->a < lu->b))
      throw ConfigError("loguniform requires finite a < b");
    if (!normalized_ && lu->b > 0.0)
      throw ConfigError("loguniform requires b <= 0 so that proportions lie in (0, 1]");
  } else if (const auto* be = std::get_if<Beta>(&family_)) {
    if (!std::isfinite(be->alpha) || !std::isfinite(be->beta) || be->alpha <= 0.0 || be->beta <= 0.0)
      throw ConfigError("beta requires alpha > 0 and beta > 0");
  }

  if (const auto* be = std::get_if<Beta>(&family_))
    moments_ = beta_log_moments(*be, log_base_);
  else
    moments_ = closed_form_moments(family_, log_base_);
}

ProportionDistribution ProportionDistribution::uniform_unit(double base)
{
  return ProportionDistribution(UniformUnit{}, base, false);
}

ProportionDistribution ProportionDistribution::log_uniform(double a, double b, double base)
{
  return ProportionDistribution(LogUniform{ a, b }, base, false);
}

ProportionDistribution ProportionDistribution::normalized_log_uniform(double base)
{
  const double r = std::sqrt(3.0);
  return ProportionDistribution(LogUniform{ -r, r }, base, true);
}

ProportionDistribution ProportionDistribution::beta(double alpha, double beta, double base)
{
  return ProportionDistribution(Beta{ alpha, beta }, base, false);
}

double ProportionDistribution::sample_log(Engine& rng) const
{
  if (const auto* lu = std::get_if<LogUniform>(&family_))
    return lu->a + (lu->b - lu->a) * uniform_closed_open(rng);
  if (std::holds_alternative<UniformUnit>(family_))
    return std::log(uniform_open_closed(rng)) / log_base_;
  return sample_cut(rng).log_p;
}

LogCut ProportionDistribution::sample_cut(Engine& rng) const
{
  if (normalized_)
    throw ConfigError("a normalized distribution has no complementary cut");

  if (const auto* lu = std::get_if<LogUniform>(&family_)) {
    const double s = lu->a + (lu->b - lu->a) * uniform_open(rng);
    return LogCut{ s, std::log(-std::expm1(s * log_base_)) / log_base_ };
  }
  if (std::holds_alternative<UniformUnit>(family_)) {
    const double u = uniform_open(rng);
    return LogCut{ std::log(u) / log_base_, std::log1p(-u) / log_base_ };
  }

  const auto& be = std::get<Beta>(family_);
  std::gamma_distribution<double> ga(be.alpha, 1.0);
  std::gamma_distribution<double> gb(be.beta, 1.0);
  for (;;) {
    const double x = ga(rng);
    const double y = gb(rng);
    if (x > 0.0 && y > 0.0) {
      const double log_sum = std::log(x + y);
      return LogCut{ (std::log(x) - log_sum) / log_base_, (std::log(y) - log_sum) / log_base_ };
    }
  }
}

std::complex<double> ProportionDistribution::log_char_fn(double omega, double* abs_error) const
{
  if (abs_error)
    *abs_error = 0.0;
  if (omega == 0.0)
    return { 1.0, 0.0 };

  if (const auto* lu = std::get_if<LogUniform>(&family_)) {
    const double half = 0.5 * (lu->b - lu->a);
    return std::polar(1.0, omega * 0.5 * (lu->a + lu->b)) * sinc(omega * half);
  }
  if (std::holds_alternative<UniformUnit>(family_))
    return 1.0 / std::complex<double>(1.0, omega / log_base_);

  // exp(i omega log_B P) = exp(-i (omega / ln B) u)
  const BetaLogDensity h{ std::get<Beta>(family_) };
  const double freq = omega / log_base_;
  const double segment = std::min(1.0, std::numbers::pi / std::abs(freq));
  const auto re = detail::integrate_half_line(
    [&](double u) { return h(u) * std::cos(freq * u); }, h.upper(), segment);
  const auto im = detail::integrate_half_line(
    [&](double u) { return -h(u) * std::sin(freq * u); }, h.upper(), segment);
  if (abs_error)
    *abs_error = re.abs_error + im.abs_error;
  return { re.value, im.value };
}

double ProportionDistribution::log_density(double s) const
{
  if (const auto* lu = std::get_if<LogUniform>(&family_))
    return (s >= lu->a && s <= lu->b) ? 1.0 / (lu->b - lu->a) : 0.0;
  if (s > 0.0)
    return 0.0;
  if (std::holds_alternative<UniformUnit>(family_))
    return std::exp(s * log_base_) * log_base_;
  const BetaLogDensity h{ std::get<Beta>(family_) };
  return h(-s * log_base_) * log_base_;
}

double sample_log(const ProportionDistribution& dist, Engine& rng)
{
  return dist.sample_log(rng);
}

LogMoments log_moments(const ProportionDistribution& dist)
{
  return dist.log_moments();
}

double sinc(double u)
{
  if (u == 0.0)
    return 1.0;
  return std::sin(u) / u;
}

std::complex<double> char_fn_normalized(const ProportionDistribution& dist,
                                        std::size_t n,
                                        double k,
                                        CharFnDiagnostics* diagnostics)
{
  if (n == 0)
    throw ConfigError("char_fn_normalized requires n >= 1");
  if (diagnostics)
    *diagnostics = {};
  if (k == 0.0)
    return { 1.0, 0.0 };

  const double nn = static_cast<double>(n);
  if (std::holds_alternative<LogUniform>(dist.family()))
    return { std::pow(sinc(k * std::sqrt(3.0 / nn)), nn), 0.0 };

  const auto& mom = dist.log_moments();
  const double sigma = std::sqrt(mom.sigma_p2);
  double err = 0.0;
  const std::complex<double> g = dist.log_char_fn(k / (std::sqrt(nn) * sigma), &err);
  const double modulus = std::min(1.0, std::abs(g));
  const double phase = nn * std::arg(g) - k * std::sqrt(nn) * mom.mu_p / sigma;
  if (diagnostics) {
    diagnostics->abs_error = nn * err;
    diagnostics->reduced_precision = err > kMomentTolerance;
  }
  return std::polar(std::pow(modulus, nn), phase);
}

} // namespace benfrag
