#pragma once

#include "benfrag/distributions.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace benfrag {

double std_normal_pdf(double x);
/// Phi(x) through erfc; the lower tail is evaluated directly so both tails
/// keep full relative precision.
double std_normal_cdf(double x);

/// Settings for inverting the characteristic function of Z^(n).
struct SpectralProfile
{
  std::size_t n = 100;
  /// Bulk bandwidth exponent: frequencies |k| <= n^epsilon carry the
  /// Gaussian part. Must lie in (0, 1/8).
  double epsilon = 0.1;
  /// Truncation of the k-integral; 0 selects min(sqrt(3n), 40).
  double k_max = 0.0;
  /// Initial trapezoid step; 0 selects k_max / 32. Halved until converged.
  double grid_step = 0.0;
  /// Stop once successive halvings change every f_n(x) by less than this.
  double tolerance = 1e-9;
};

double default_k_max(std::size_t n);
double effective_k_max(const SpectralProfile& profile);
std::vector<std::string> validate(const SpectralProfile& profile);

/// Upper bound on (1/2pi) * integral over |k| > k_max of |f^_n(k)|, from the
/// power-law decay of the log-proportion characteristic function. +inf when
/// no bound is available (n = 1, or a Beta law with beta < 1).
double char_fn_tail_bound(const ProportionDistribution& dist, std::size_t n, double k_max);

struct InversionResult
{
  std::vector<double> x;
  std::vector<double> density; ///< f_n(x)
  double k_max = 0.0;
  double step = 0.0;            ///< final trapezoid step
  std::size_t nodes = 0;
  double last_change = 0.0;     ///< max |f change| at the final halving
  double max_imag_residual = 0.0;
  double tail_bound = 0.0;
};

/// f_n(x) = (1/2pi) integral_{|k| <= k_max} f^_n(k) e^{-ikx} dk by composite
/// trapezoid with step halving. Requires n >= 2. Throws NumericalError if
/// the imaginary residue exceeds 1e-10 or halving does not converge.
InversionResult invert_char_fn(const SpectralProfile& profile,
                               const ProportionDistribution& dist,
                               std::span<const double> x_grid);

/// lo, lo + step, ..., up to hi inclusive (within half a step).
std::vector<double> uniform_grid(double lo, double hi, double step);

/// Density of the maximum of m iid copies: g = m F^{m-1} f, either for the
/// Gaussian limit or for a tabulated f_n.
class MaxDensityModel
{
public:
  static MaxDensityModel gaussian(std::size_t m);
  /// f_n tabulated on an ascending grid; F_n by cumulative trapezoid, zero
  /// left of the grid.
  static MaxDensityModel numeric(std::size_t m, std::vector<double> x, std::vector<double> density);
  static MaxDensityModel numeric(std::size_t m, const InversionResult& inversion);

  std::size_t m() const noexcept { return m_; }
  bool is_gaussian() const noexcept { return gaussian_; }

  double component_pdf(double x) const;
  double component_cdf(double x) const;
  /// g(x) = m F(x)^{m-1} f(x)
  double density(double x) const;
  /// F(x)^m, the CDF of the maximum.
  double max_cdf(double x) const;

private:
  MaxDensityModel(std::size_t m, bool gaussian);

  std::size_t m_;
  bool gaussian_;
  std::vector<double> x_;
  std::vector<double> pdf_;
  std::vector<double> cdf_;
};

double max_density(const MaxDensityModel& model, double x);

/// E_n = ((a + j) / sqrt(n), (b + j) / sqrt(n)) over all integers j.
struct WindowSet
{
  double a = 0.0;
  double b = 1.0;
  std::size_t n = 1;
};

/// Integral of g over E_n intersected with [-sqrt(3n), sqrt(3n)], summed
/// interval by interval as differences of the max CDF.
double window_probability(const MaxDensityModel& model, const WindowSet& window);

enum class MellinGrid
{
  original, ///< |M[f](1 - 2 pi i l / ln B)|^n
  char_fn,  ///< |f^_n(l sqrt n)|
};

struct MellinTerm
{
  int ell = 0;
  double term_modulus = 0.0;
  double partial_sum = 0.0;
};

struct MellinResult
{
  double sum = 0.0;
  double largest_term = 0.0;
  /// Bound on the omitted terms |l| > ell_max; +inf when not certifiable.
  double tail_bound = 0.0;
  bool tail_certified = false;
  std::vector<MellinTerm> terms; ///< l = 1, -1, 2, -2, ...
};

/// M[f](1 + i tau) = E[P^{i tau}].
std::complex<double> mellin_on_unit_line(const ProportionDistribution& dist, double tau);

MellinResult mellin_condition_sum(const ProportionDistribution& dist, std::size_t n, int ell_max, MellinGrid grid);

} // namespace benfrag
