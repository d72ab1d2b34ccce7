#include "benfrag/errors.hpp"
#include "benfrag/fragmentation.hpp"
#include "benfrag/frame.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace benfrag;

namespace {

LinearProcessConfig linear_config(std::size_t m, std::size_t n, std::uint64_t seed)
{
  LinearProcessConfig cfg;
  cfg.m = m;
  cfg.n_steps = n;
  cfg.seed = seed;
  cfg.axis_distributions = { ProportionDistribution::uniform_unit() };
  return cfg;
}

double log_sum_exp10(const std::vector<double>& xs)
{
  const double hi = *std::max_element(xs.begin(), xs.end());
  long double s = 0.0L;
  for (double x : xs)
    s += std::pow(10.0L, static_cast<long double>(x - hi));
  return hi + static_cast<double>(std::log10(s));
}

} // namespace

TEST_CASE("step_linear adds cut logs componentwise")
{
  const LogBox a = step_linear(LogBox{ { 0.0, 0.0 }, 0 }, std::vector{ -0.3, -0.7 });
  CHECK(a.log_sides == std::vector{ -0.3, -0.7 });
  CHECK(a.step == 1);

  const LogBox b = step_linear(LogBox{ { -1.0, -2.0 }, 4 }, std::vector{ 0.0, 0.0 });
  CHECK(b.log_sides == std::vector{ -1.0, -2.0 });
  CHECK(b.step == 5);

  const LogBox c = step_linear(LogBox{ { -1.0, -2.0, -3.0 }, 0 }, std::vector{ -0.1, -0.1, -0.1 });
  CHECK(c.log_sides == std::vector{ -1.0 + -0.1, -2.0 + -0.1, -3.0 + -0.1 });

  CHECK_THROWS_AS(step_linear(LogBox{ { 0.0, 0.0 }, 0 }, std::vector{ -0.1 }), ConfigError);
}

TEST_CASE("run_linear trajectories")
{
  SUBCASE("zero steps returns the initial box")
  {
    auto cfg = linear_config(3, 0, 1);
    cfg.initial_log_sides = { 0.5, -1.0, 2.0 };
    const auto traj = run_linear(cfg);
    REQUIRE(traj.size() == 1);
    CHECK(traj.front() == LogBox{ { 0.5, -1.0, 2.0 }, 0 });
  }
  SUBCASE("same seed reproduces the trajectory bit for bit")
  {
    const auto cfg = linear_config(4, 50, 1234);
    CHECK(run_linear(cfg) == run_linear(cfg));
    auto other = cfg;
    other.stream_index = 1;
    CHECK(run_linear(cfg) != run_linear(other));
  }
  SUBCASE("sides shrink and equal the running sum of cuts")
  {
    const auto cfg = linear_config(2, 200, 77);
    const auto traj = run_linear(cfg);
    Engine rng = make_stream(cfg.seed, cfg.stream_index);
    std::vector<double> sums(2, 0.0);
    for (std::size_t t = 1; t < traj.size(); ++t) {
      for (std::size_t i = 0; i < 2; ++i) {
        sums[i] += cfg.axis_distributions[0].sample_log(rng);
        REQUIRE(traj[t].log_sides[i] == sums[i]);
        REQUIRE(traj[t].log_sides[i] <= traj[t - 1].log_sides[i]);
      }
    }
  }
}

TEST_CASE("mean log-side after 100 uniform cuts is 100 E[log10 U]")
{
  const std::size_t trials = 10000;
  std::vector<double> finals;
  for (std::size_t t = 0; t < trials; ++t) {
    auto cfg = linear_config(1, 100, 5);
    cfg.stream_index = t;
    finals.push_back(run_linear(cfg).back().log_sides[0]);
  }
  const auto mv = oracle::mean_var(finals);
  const double se = 0.4342944819 * std::sqrt(100.0) / std::sqrt(double(trials));
  CHECK(std::abs(mv.mean - -43.42944819) <= 4.0 * se);
}

TEST_CASE("axis laws must agree unless heterogeneity is allowed")
{
  auto cfg = linear_config(2, 5, 1);
  cfg.axis_distributions = { ProportionDistribution::uniform_unit(), ProportionDistribution::beta(2.0, 2.0) };
  const auto v = validate(cfg);
  REQUIRE(v.size() == 1);
  CHECK(v.front().find("allow_heterogeneous") != std::string::npos);
  CHECK_THROWS_AS(run_linear(cfg), ConfigError);

  cfg.allow_heterogeneous = true;
  CHECK(validate(cfg).empty());
  CHECK(run_linear(cfg).size() == 6);
}

TEST_CASE("branching tree: fixed cut at depth one")
{
  BranchTreeSpec spec;
  spec.m = 1;
  spec.n_levels = 1;
  BranchingTree tree(spec, [] { return LogCut{ std::log10(0.25), std::log10(0.75) }; });
  std::vector<double> leaves;
  while (tree.next())
    leaves.push_back(tree.log_volume());
  REQUIRE(leaves.size() == 2);
  CHECK(std::pow(10.0, leaves[0]) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(std::pow(10.0, leaves[1]) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("branching tree: partition of a square at depth one")
{
  BranchTreeSpec spec;
  spec.m = 2;
  spec.n_levels = 1;
  spec.seed = 3;
  spec.initial_log_sides = { 0.2, -0.1 };
  const auto leaves = collect_leaf_log_volumes(spec);
  REQUIRE(leaves.size() == 4);
  CHECK(log_sum_exp10(leaves) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("branching tree: leaf count, conservation, determinism")
{
  for (std::size_t m : { 1, 2, 3 }) {
    for (std::size_t n : { 1, 2, 4 }) {
      if (m * n > 12)
        continue;
      BranchTreeSpec spec;
      spec.m = m;
      spec.n_levels = n;
      spec.seed = 1000 + m * 10 + n;
      spec.dist = ProportionDistribution::beta(2.0, 3.0);
      const auto leaves = collect_leaf_log_volumes(spec);
      CHECK(leaves.size() == (std::size_t{ 1 } << (m * n)));
      CHECK(std::abs(log_sum_exp10(leaves)) <= 1e-9 * static_cast<double>(n));
      CHECK(leaves == collect_leaf_log_volumes(spec));
    }
  }
}

TEST_CASE("branching tree: per-axis sides conserve each axis length")
{
  BranchTreeSpec spec;
  spec.m = 3;
  spec.n_levels = 2;
  spec.seed = 8;
  BranchingTree tree(spec);
  // Each leaf is a grid cell; the volumes conserve, and every leaf side is
  // no larger than the root side.
  std::size_t count = 0;
  while (tree.next()) {
    for (double s : tree.log_sides())
      REQUIRE(s < 0.0);
    ++count;
  }
  CHECK(count == tree.leaf_count());
  CHECK(tree.leaf_count() == 64);
}

TEST_CASE("branching tree: leaf policy")
{
  BranchTreeSpec spec;
  spec.m = 3;
  spec.n_levels = 10;
  const auto v = validate(spec);
  REQUIRE(v.size() == 1);
  CHECK(v.front() == "2^30 leaves exceed in-memory cap");
  CHECK_THROWS_AS(run_branching(spec), ConfigError);
  CHECK_THROWS_AS(collect_leaf_log_volumes(spec), ConfigError);

  spec.streaming = true;
  CHECK(validate(spec).empty());
  CHECK(run_branching(spec).leaf_count() == (std::uint64_t{ 1 } << 30));

  spec.n_levels = 21;
  CHECK_THROWS_AS(run_branching(spec), ConfigError);
}

TEST_CASE("rho statistic")
{
  const std::vector<double> leaves{ std::log10(1.0), std::log10(2.5), std::log10(0.3), std::log10(9.9) };
  CHECK(rho_statistic(leaves, 3.0, 10.0) == 0.75);
  CHECK(rho_statistic(leaves, 10.0, 10.0) == 1.0);
  CHECK_THROWS_AS(rho_statistic(leaves, 0.5, 10.0), ConfigError);
  CHECK_THROWS_AS(rho_statistic(leaves, 11.0, 10.0), ConfigError);

  BranchTreeSpec spec;
  spec.m = 1;
  spec.n_levels = 12;
  spec.seed = 4;
  const auto random_leaves = collect_leaf_log_volumes(spec);
  CHECK(rho_statistic(random_leaves, 1.0, 10.0) == 0.0);
  CHECK(rho_statistic(random_leaves, 10.0, 10.0) == 1.0);

  BranchingTree tree(spec);
  CHECK(rho_statistic(tree, 2.0, 10.0) == rho_statistic(random_leaves, 2.0, 10.0));
}
