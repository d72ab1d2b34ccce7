#include "benfrag/spectral.hpp"

#include "benfrag/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace benfrag {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kImagResidualLimit = 1e-10;
constexpr int kMaxHalvings = 14;
constexpr int kMinHalvings = 2;

void throw_if_invalid(const std::vector<std::string>& v)
{
  if (v.empty())
    return;
  std::string msg = v.front();
  for (std::size_t i = 1; i < v.size(); ++i)
    msg += "; " + v[i];
  throw ConfigError(msg);
}

// Largest value of the log-proportion density for a Beta law with beta >= 1
// (log-concave in u = -ln P, so golden-section search is exact enough).
double beta_log_density_max(const ProportionDistribution& dist)
{
  const auto& be = std::get<Beta>(dist.family());
  if (be.beta == 1.0)
    return dist.log_density(0.0);
  auto f = [&](double u) { return dist.log_density(-u / dist.log_base()); };
  double lo = 0.0;
  double hi = 60.0 / be.alpha + 40.0;
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 200; ++i) {
    const double c = hi - r * (hi - lo);
    const double d = lo + r * (hi - lo);
    if (f(c) < f(d))
      lo = c;
    else
      hi = d;
  }
  return f(0.5 * (lo + hi));
}

// C with |E[exp(i omega log_B P)]| <= C / |omega|: the total variation of the
// log-proportion density.
double decay_constant(const ProportionDistribution& dist)
{
  if (const auto* lu = std::get_if<LogUniform>(&dist.family()))
    return 2.0 / (lu->b - lu->a);
  if (std::holds_alternative<UniformUnit>(dist.family()))
    return dist.log_base();
  const auto& be = std::get<Beta>(dist.family());
  if (be.beta < 1.0)
    return kInf;
  return 2.0 * beta_log_density_max(dist);
}

// 2 * sum_{l > L} (A / (c l))^n <= 2 (A / c)^n L^{1-n} / (n - 1), for n >= 2.
double power_tail(double amplitude, double scale, double from, std::size_t n)
{
  if (n < 2 || !std::isfinite(amplitude))
    return kInf;
  const double nn = static_cast<double>(n);
  const double log_bound =
    std::log(2.0) + nn * std::log(amplitude / scale) + (1.0 - nn) * std::log(from) - std::log(nn - 1.0);
  return std::exp(log_bound);
}

} // namespace

double std_normal_pdf(double x)
{
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double std_normal_cdf(double x)
{
  if (x < 0.0)
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
  return 1.0 - 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double default_k_max(std::size_t n)
{
  return std::min(std::sqrt(3.0 * static_cast<double>(n)), 40.0);
}

double effective_k_max(const SpectralProfile& profile)
{
  return profile.k_max > 0.0 ? profile.k_max : default_k_max(profile.n);
}

std::vector<std::string> validate(const SpectralProfile& profile)
{
  std::vector<std::string> v;
  if (profile.n < 2)
    v.emplace_back("spectral inversion requires n >= 2");
  if (!(profile.epsilon > 0.0 && profile.epsilon < 0.125))
    v.emplace_back("epsilon must lie in (0, 1/8)");
  if (profile.k_max < 0.0)
    v.emplace_back("k_max must be >= 0");
  else if (profile.n >= 1 && effective_k_max(profile) < std::pow(static_cast<double>(profile.n), profile.epsilon))
    v.emplace_back("k_max must be >= n^epsilon");
  if (profile.grid_step < 0.0)
    v.emplace_back("grid_step must be >= 0");
  if (!(profile.tolerance > 0.0))
    v.emplace_back("tolerance must be > 0");
  return v;
}

double char_fn_tail_bound(const ProportionDistribution& dist, std::size_t n, double k_max)
{
  // |f^_n(k)| = |g^(k / (sqrt(n) sigma))|^n <= (C sqrt(n) sigma / |k|)^n
  const double sigma = std::sqrt(dist.log_moments().sigma_p2);
  const double amplitude = decay_constant(dist) * sigma * std::sqrt(static_cast<double>(n));
  return power_tail(amplitude, 1.0, k_max, n) / (2.0 * std::numbers::pi);
}

std::vector<double> uniform_grid(double lo, double hi, double step)
{
  if (!(step > 0.0) || !(hi >= lo))
    throw ConfigError("grid needs step > 0 and hi >= lo");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i)
    grid[i] = lo + static_cast<double>(i) * step;
  return grid;
}

InversionResult invert_char_fn(const SpectralProfile& profile,
                               const ProportionDistribution& dist,
                               std::span<const double> x_grid)
{
  throw_if_invalid(validate(profile));

  InversionResult out;
  out.x.assign(x_grid.begin(), x_grid.end());
  out.k_max = effective_k_max(profile);
  out.tail_bound = char_fn_tail_bound(dist, profile.n, out.k_max);

  const double K = out.k_max;
  double h = profile.grid_step > 0.0 ? profile.grid_step : K / 32.0;
  auto intervals = static_cast<std::size_t>(std::ceil(2.0 * K / h));
  h = 2.0 * K / static_cast<double>(intervals);

  auto cf = [&](double k) { return char_fn_normalized(dist, profile.n, k); };

  // acc[i] = sum over nodes of w_j f^(k_j) e^{-i k_j x_i}; integral = h * acc
  const std::size_t nx = out.x.size();
  std::vector<std::complex<double>> acc(nx, { 0.0, 0.0 });
  auto add_node = [&](double k, double weight) {
    const std::complex<double> fk = weight * cf(k);
    for (std::size_t i = 0; i < nx; ++i)
      acc[i] += fk * std::polar(1.0, -k * out.x[i]);
  };
  for (std::size_t j = 0; j <= intervals; ++j)
    add_node(-K + static_cast<double>(j) * h, (j == 0 || j == intervals) ? 0.5 : 1.0);

  const double inv_2pi = 1.0 / (2.0 * std::numbers::pi);
  std::vector<std::complex<double>> previous(nx);
  for (std::size_t i = 0; i < nx; ++i)
    previous[i] = acc[i] * h * inv_2pi;

  bool converged = false;
  for (int level = 1; level <= kMaxHalvings; ++level) {
    for (std::size_t j = 0; j < intervals; ++j)
      add_node(-K + (static_cast<double>(j) + 0.5) * h, 1.0);
    intervals *= 2;
    h *= 0.5;

    double change = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
      const std::complex<double> current = acc[i] * h * inv_2pi;
      change = std::max(change, std::abs(current - previous[i]));
      previous[i] = current;
    }
    out.last_change = change;
    if (level >= kMinHalvings && change < profile.tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NumericalError("char-fn inversion did not converge under step halving");

  out.step = h;
  out.nodes = intervals + 1;
  out.density.resize(nx);
  for (std::size_t i = 0; i < nx; ++i) {
    out.density[i] = previous[i].real();
    out.max_imag_residual = std::max(out.max_imag_residual, std::abs(previous[i].imag()));
  }
  if (out.max_imag_residual > kImagResidualLimit)
    throw NumericalError("char-fn inversion left an imaginary residue above 1e-10");
  return out;
}

MaxDensityModel::MaxDensityModel(std::size_t m, bool gaussian)
  : m_(m)
  , gaussian_(gaussian)
{
  if (m == 0)
    throw ConfigError("max density needs m >= 1");
}

MaxDensityModel MaxDensityModel::gaussian(std::size_t m)
{
  return MaxDensityModel(m, true);
}

MaxDensityModel MaxDensityModel::numeric(std::size_t m, std::vector<double> x, std::vector<double> density)
{
  if (x.size() < 2 || x.size() != density.size() || !std::is_sorted(x.begin(), x.end()))
    throw ConfigError("numeric max density needs an ascending grid with matching density values");
  MaxDensityModel model(m, false);
  model.cdf_.assign(x.size(), 0.0);
  for (std::size_t i = 1; i < x.size(); ++i)
    model.cdf_[i] = model.cdf_[i - 1] + 0.5 * (density[i] + density[i - 1]) * (x[i] - x[i - 1]);
  model.x_ = std::move(x);
  model.pdf_ = std::move(density);
  return model;
}

MaxDensityModel MaxDensityModel::numeric(std::size_t m, const InversionResult& inversion)
{
  return numeric(m, inversion.x, inversion.density);
}

double MaxDensityModel::component_pdf(double x) const
{
  if (gaussian_)
    return std_normal_pdf(x);
  if (x < x_.front() || x > x_.back())
    return 0.0;
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - x_.begin()), x_.size() - 1);
  const std::size_t lo = hi - 1;
  const double w = (x - x_[lo]) / (x_[hi] - x_[lo]);
  return pdf_[lo] + w * (pdf_[hi] - pdf_[lo]);
}

double MaxDensityModel::component_cdf(double x) const
{
  if (gaussian_)
    return std_normal_cdf(x);
  if (x <= x_.front())
    return 0.0;
  if (x >= x_.back())
    return cdf_.back();
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const auto hi = static_cast<std::size_t>(it - x_.begin());
  const std::size_t lo = hi - 1;
  // exact integral of the linearly interpolated density
  const double dx = x - x_[lo];
  const double slope = (pdf_[hi] - pdf_[lo]) / (x_[hi] - x_[lo]);
  return cdf_[lo] + pdf_[lo] * dx + 0.5 * slope * dx * dx;
}

double MaxDensityModel::density(double x) const
{
  const double f = component_pdf(x);
  if (m_ == 1)
    return f;
  return static_cast<double>(m_) * std::pow(component_cdf(x), static_cast<double>(m_ - 1)) * f;
}

double MaxDensityModel::max_cdf(double x) const
{
  return std::pow(component_cdf(x), static_cast<double>(m_));
}

double max_density(const MaxDensityModel& model, double x)
{
  return model.density(x);
}

double window_probability(const MaxDensityModel& model, const WindowSet& window)
{
  if (!(window.a >= 0.0 && window.a < window.b && window.b <= 1.0))
    throw ConfigError("window needs 0 <= a < b <= 1");
  if (window.n == 0)
    throw ConfigError("window needs n >= 1");

  const double root_n = std::sqrt(static_cast<double>(window.n));
  const double support = std::sqrt(3.0 * static_cast<double>(window.n));
  const double reach = support * root_n; // support edge in units of 1/sqrt(n)
  const auto j_lo = static_cast<long long>(std::floor(-reach - window.b));
  const auto j_hi = static_cast<long long>(std::ceil(reach - window.a));

  double total = 0.0;
  for (long long j = j_lo; j <= j_hi; ++j) {
    const double lo = std::max((static_cast<double>(j) + window.a) / root_n, -support);
    const double hi = std::min((static_cast<double>(j) + window.b) / root_n, support);
    if (hi > lo)
      total += model.max_cdf(hi) - model.max_cdf(lo);
  }
  return total;
}

std::complex<double> mellin_on_unit_line(const ProportionDistribution& dist, double tau)
{
  // P^{i tau} = exp(i (tau ln B) log_B P)
  return dist.log_char_fn(tau * dist.log_base());
}

MellinResult mellin_condition_sum(const ProportionDistribution& dist, std::size_t n, int ell_max, MellinGrid grid)
{
  if (ell_max < 1)
    throw ConfigError("ell_max must be >= 1");
  if (n == 0)
    throw ConfigError("Mellin sum requires n >= 1");

  const double nn = static_cast<double>(n);
  auto term = [&](int ell) {
    if (grid == MellinGrid::original) {
      const double tau = -2.0 * std::numbers::pi * ell / dist.log_base();
      return std::pow(std::min(1.0, std::abs(mellin_on_unit_line(dist, tau))), nn);
    }
    return std::abs(char_fn_normalized(dist, n, ell * std::sqrt(nn)));
  };

  MellinResult out;
  for (int ell = 1; ell <= ell_max; ++ell) {
    for (int sign : { 1, -1 }) {
      const double t = term(sign * ell);
      out.sum += t;
      out.largest_term = std::max(out.largest_term, t);
      out.terms.push_back(MellinTerm{ sign * ell, t, out.sum });
    }
  }

  // Frequencies omega_l = c l with |g^(omega)| <= C / |omega|.
  const double scale =
    grid == MellinGrid::original ? 2.0 * std::numbers::pi : 1.0 / std::sqrt(dist.log_moments().sigma_p2);
  out.tail_bound = power_tail(decay_constant(dist), scale, static_cast<double>(ell_max), n);
  out.tail_certified = std::isfinite(out.tail_bound);
  return out;
}

} // namespace benfrag
