#include "benfrag/distributions.hpp"
#include "benfrag/errors.hpp"
#include "benfrag/spectral.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace benfrag;

namespace {

double trapezoid(const std::vector<double>& x, const std::vector<double>& y)
{
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i)
    s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

double sup_distance_to_normal(const InversionResult& r)
{
  double sup = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i)
    sup = std::max(sup, std::abs(r.density[i] - std_normal_pdf(r.x[i])));
  return sup;
}

} // namespace

TEST_CASE("normal CDF")
{
  CHECK(std_normal_cdf(0.0) == 0.5);
  for (double x : { 8.0, 9.5, 40.0 })
    CHECK(std::abs(std_normal_cdf(x) - 1.0) <= 1e-15);
  CHECK(std::abs(std_normal_cdf(1.0) - static_cast<double>(oracle::normal_cdf_series(1.0L))) <= 1e-7);
  CHECK(std::abs(std_normal_cdf(1.0) - 0.8413447) <= 1e-7);
  for (double x : { 0.1, 0.7, 1.9, 3.3, 5.0 }) {
    CHECK(std_normal_cdf(-x) + std_normal_cdf(x) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(std_normal_cdf(x) - static_cast<double>(oracle::normal_cdf_series(x))) <= 1e-7);
  }
  double previous = 0.0;
  for (double x = -10.0; x <= 10.0; x += 0.25) {
    CHECK(std_normal_cdf(x) >= previous);
    previous = std_normal_cdf(x);
  }
  const auto grid = uniform_grid(-10.0, 10.0, 0.01);
  std::vector<double> pdf;
  for (double x : grid)
    pdf.push_back(std_normal_pdf(x));
  CHECK(trapezoid(grid, pdf) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("spectral profile validation")
{
  SpectralProfile p;
  CHECK(validate(p).empty());
  CHECK(effective_k_max(p) == doctest::Approx(std::sqrt(300.0)));
  p.n = 10000;
  CHECK(effective_k_max(p) == 40.0);
  p.epsilon = 0.2;
  CHECK_FALSE(validate(p).empty());
  p.epsilon = 0.1;
  p.k_max = 1.5;
  CHECK_FALSE(validate(p).empty());
  p.n = 1;
  p.k_max = 0.0;
  CHECK_FALSE(validate(p).empty());
}

TEST_CASE("inversion of the normalized log-uniform characteristic function")
{
  const auto dist = ProportionDistribution::normalized_log_uniform();
  const auto grid = uniform_grid(-10.0, 10.0, 0.01);

  SpectralProfile p;
  p.n = 100;
  const InversionResult r100 = invert_char_fn(p, dist, grid);
  const auto at0 = std::find(grid.begin(), grid.end(), 0.0) - grid.begin();
  CHECK(std::abs(r100.density[at0] - 0.398942) <= 0.01);
  CHECK(trapezoid(r100.x, r100.density) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r100.last_change < 1e-9);
  CHECK(r100.max_imag_residual <= 1e-10);

  p.n = 400;
  const InversionResult r400 = invert_char_fn(p, dist, grid);
  CHECK(sup_distance_to_normal(r400) <= 0.5 * sup_distance_to_normal(r100));
}

TEST_CASE("inversion of other families")
{
  const auto grid = uniform_grid(-8.0, 8.0, 0.02);
  SpectralProfile p;
  p.n = 200;
  for (const auto& dist : { ProportionDistribution::uniform_unit(), ProportionDistribution::beta(2.0, 3.0) }) {
    const InversionResult r = invert_char_fn(p, dist, grid);
    CHECK(trapezoid(r.x, r.density) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(sup_distance_to_normal(r) < 0.05);
  }
}

TEST_CASE("mid-band suppression of the characteristic function")
{
  const auto dist = ProportionDistribution::normalized_log_uniform();
  for (std::size_t n : { 16, 64, 256, 1024 }) {
    const double k = std::pow(double(n), 0.25);
    CHECK(std::abs(char_fn_normalized(dist, n, k)) <= std::exp(-std::sqrt(double(n)) / 2.1) + 1e-12);
  }
}

TEST_CASE("density of the maximum")
{
  const auto grid = uniform_grid(-9.0, 9.0, 0.01);
  SpectralProfile p;
  p.n = 100;
  const InversionResult r = invert_char_fn(p, ProportionDistribution::normalized_log_uniform(), grid);

  const auto one = MaxDensityModel::numeric(1, r);
  for (std::size_t i = 0; i < grid.size(); i += 97)
    CHECK(max_density(one, grid[i]) == doctest::Approx(r.density[i]).epsilon(1e-12));

  CHECK(max_density(MaxDensityModel::gaussian(2), 0.0) == doctest::Approx(0.398942).epsilon(1e-6));

  for (std::size_t m : { 1, 3, 5 }) {
    std::vector<double> g, gn;
    const auto gauss = MaxDensityModel::gaussian(m);
    const auto numeric = MaxDensityModel::numeric(m, r);
    for (double x : grid) {
      g.push_back(max_density(gauss, x));
      gn.push_back(max_density(numeric, x));
    }
    CHECK(trapezoid(grid, g) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(trapezoid(grid, gn) == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("window probabilities")
{
  const auto gauss3 = MaxDensityModel::gaussian(3);
  CHECK(window_probability(gauss3, { 0.0, 1.0, 400 }) == doctest::Approx(1.0).epsilon(1e-6));
  const double w = window_probability(gauss3, { 0.0, std::log10(2.0), 400 });
  CHECK(std::abs(w - 0.30103) <= 0.01);
  CHECK(std::abs(window_probability(gauss3, { 0.4, 0.4 + std::log10(2.0), 400 }) - w) <= 0.01);

  const auto gauss1 = MaxDensityModel::gaussian(1);
  CHECK(std::abs(window_probability(gauss1, { 0.2, 0.5, 900 }) - 0.3) <= 1e-3);

  CHECK_THROWS_AS(window_probability(gauss3, { 0.5, 0.5, 10 }), ConfigError);
  CHECK_THROWS_AS(window_probability(gauss3, { 0.0, 1.2, 10 }), ConfigError);
}

TEST_CASE("Mellin condition sums")
{
  const double l10 = std::log(10.0);
  const auto unit = ProportionDistribution::uniform_unit();

  const MellinResult one = mellin_condition_sum(unit, 1, 5, MellinGrid::original);
  REQUIRE(one.terms.size() == 10);
  CHECK(one.terms[0].ell == 1);
  CHECK(one.terms[1].ell == -1);
  const double want = 1.0 / std::sqrt(1.0 + std::pow(2.0 * std::numbers::pi / l10, 2.0));
  CHECK(std::abs(one.terms[0].term_modulus - want) <= 1e-9);
  CHECK(std::abs(one.terms[1].term_modulus - want) <= 1e-9);
  CHECK(one.largest_term == one.terms[0].term_modulus);
  CHECK_FALSE(one.tail_certified);

  SUBCASE("log-uniform transform is a sinc")
  {
    const auto lu = ProportionDistribution::log_uniform(-1.5, -0.25);
    for (int ell = 1; ell <= 6; ++ell)
      CHECK(std::abs(lu.log_char_fn(ell)) == doctest::Approx(std::abs(sinc(ell * 1.25 / 2.0))).epsilon(1e-14));
  }
  SUBCASE("sums are non-increasing in n")
  {
    for (const auto& dist : { unit, ProportionDistribution::log_uniform(-1.0, 0.0), ProportionDistribution::beta(2.0, 2.0) })
      for (auto grid : { MellinGrid::original, MellinGrid::char_fn }) {
        double previous = HUGE_VAL;
        for (std::size_t n = 1; n <= 12; ++n) {
          const double s = mellin_condition_sum(dist, n, 30, grid).sum;
          CHECK(s <= previous);
          previous = s;
        }
      }
  }
  SUBCASE("Beta(2, 2) agrees with its closed-form Mellin transform")
  {
    const auto b22 = ProportionDistribution::beta(2.0, 2.0);
    const MellinResult r = mellin_condition_sum(b22, 1, 4, MellinGrid::original);
    for (const auto& t : r.terms) {
      const std::complex<double> s(1.0, -2.0 * std::numbers::pi * t.ell / l10);
      CHECK(t.term_modulus == doctest::Approx(std::abs(6.0 / ((s + 1.0) * (s + 2.0)))).epsilon(1e-9));
    }
  }
  SUBCASE("large n certifies the tail")
  {
    const MellinResult r = mellin_condition_sum(unit, 20, 50, MellinGrid::original);
    CHECK(r.sum < 1e-6);
    CHECK(r.tail_certified);
  }
  CHECK_THROWS_AS(mellin_condition_sum(unit, 3, 0, MellinGrid::original), ConfigError);
}
