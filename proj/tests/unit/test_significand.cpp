#include "benfrag/errors.hpp"
#include "benfrag/random.hpp"
#include "benfrag/significand.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

using namespace benfrag;

TEST_CASE("significands from logs")
{
  CHECK(significand_from_log(std::log10(123.45), 10.0) == doctest::Approx(1.2345).epsilon(1e-12));
  CHECK(significand_from_log(std::log10(0.00321), 10.0) == doctest::Approx(3.21).epsilon(1e-12));
  CHECK(fractional_log(std::log10(0.00321)) == doctest::Approx(0.5065).epsilon(1e-4));
  CHECK(significand_from_log(std::log2(3.0), 2.0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(significand_from_log(-3.0, 10.0) == 1.0);
  CHECK_THROWS_AS(significand_from_log(std::numeric_limits<double>::quiet_NaN(), 10.0), NumericalError);
  CHECK_THROWS_AS(significand_from_log(-std::numeric_limits<double>::infinity(), 10.0), NumericalError);
}

TEST_CASE("fractional parts stay in [0, 1)")
{
  for (double x : { -1e-17, -2.0, -0.0, 5.999999999999999, 1e15 + 0.5, -1e-300 }) {
    const double u = fractional_log(x);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("significands are invariant under integer shifts")
{
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> value(-30.0, 30.0);
  std::uniform_int_distribution<int> shift(-100, 100);
  for (int i = 0; i < 10000; ++i) {
    const double x = value(rng);
    const int k = shift(rng);
    REQUIRE(std::abs(significand_from_log(x + k, 10.0) - significand_from_log(x, 10.0)) <= 1e-12);
  }
}

TEST_CASE("Benford CDF")
{
  CHECK(benford_cdf(2.0, 10.0) == doctest::Approx(0.3010300).epsilon(1e-7));
  CHECK(benford_cdf(1.0, 10.0) == 0.0);
  CHECK(benford_cdf(10.0, 10.0) == 1.0);
  CHECK(benford_cdf(std::sqrt(10.0), 10.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(benford_cdf(0.5, 10.0), ConfigError);
  CHECK_THROWS_AS(benford_cdf(10.5, 10.0), ConfigError);
}

TEST_CASE("first digits")
{
  CHECK(first_digit_from_log10(std::log10(123.45)) == 1);
  CHECK(first_digit_from_log10(std::log10(0.0987)) == 9);
  CHECK(first_digit_from_log10(std::log10(5.0)) == 5);
  const auto p = benford_digit_probabilities();
  CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p[0] == doctest::Approx(std::log10(2.0)));
}

TEST_CASE("KS distance of a single value at the Benford median")
{
  const SignificandSample s({ 0.5 }, 10.0);
  CHECK(conformance(s).ks_distance == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("chi-square of perfect counts is zero")
{
  const auto p = benford_digit_probabilities();
  std::array<double, 9> counts{};
  for (std::size_t i = 0; i < 9; ++i)
    counts[i] = 1e6 * p[i];
  CHECK(first_digit_chi2(counts) == doctest::Approx(0.0));
  CHECK(digit_mad(p) == 0.0);
  counts[0] += 100.0;
  CHECK(first_digit_chi2(counts) > 0.0);
}

TEST_CASE("exact Benford samples conform")
{
  Engine rng = make_stream(99, 0);
  std::vector<double> logs(100000);
  for (auto& x : logs)
    x = uniform_closed_open(rng) - 7.0;
  const BenfordReport r = conformance(SignificandSample(logs, 10.0));
  CHECK(r.ks_distance <= 0.0095);
  REQUIRE(r.chi2_first_digit.has_value());
  // 8 degrees of freedom, 99.9% quantile
  CHECK(*r.chi2_first_digit < 26.12);
  REQUIRE(r.digit_frequencies.has_value());
  CHECK(std::accumulate(r.digit_frequencies->begin(), r.digit_frequencies->end(), 0.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*r.mad_digits < 0.006);
  CHECK(r.sample_size == 100000);
}

TEST_CASE("powers of two are equidistributed")
{
  std::vector<double> logs;
  for (int j = 1; j <= 10000; ++j)
    logs.push_back(j * std::log10(2.0));
  CHECK(conformance(SignificandSample(logs, 10.0)).ks_distance <= 0.01);
}

TEST_CASE("digit statistics are base 10 only")
{
  const SignificandSample s({ 0.1, 0.7, 0.3 }, 2.0);
  const BenfordReport r = conformance(s);
  CHECK_FALSE(r.chi2_first_digit.has_value());
  CHECK_FALSE(r.mad_digits.has_value());
  CHECK_THROWS_AS(first_digit_counts(s), ConfigError);
  CHECK_THROWS_AS(conformance(SignificandSample({}, 10.0)), ConfigError);
}

TEST_CASE("KS distance of a lattice")
{
  std::vector<double> u;
  for (int i = 0; i < 4; ++i)
    u.push_back(i / 4.0);
  CHECK(ks_distance_uniform(u) == doctest::Approx(0.25));
}
