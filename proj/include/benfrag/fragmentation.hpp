#pragma once

#include "benfrag/distributions.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace benfrag {

/// An m-dimensional box stored as base-B logs of its side lengths.
struct LogBox
{
  std::vector<double> log_sides;
  std::size_t step = 0;

  std::size_t dimension() const noexcept { return log_sides.size(); }
  /// Sum of the log-sides, left to right.
  double log_volume() const noexcept;

  bool operator==(const LogBox&) const = default;
};

/// Multiplies every side by its proportion cut: log_sides[i] += cuts[i].
LogBox step_linear(const LogBox& box, std::span<const double> cuts);

struct LinearProcessConfig
{
  std::size_t m = 1;
  /// Either one law shared by all axes, or one per axis (requires
  /// `allow_heterogeneous`).
  std::vector<ProportionDistribution> axis_distributions;
  std::size_t n_steps = 1;
  /// Empty means the unit box.
  std::vector<double> initial_log_sides;
  std::uint64_t seed = 0;
  /// Substream of `seed` used by this trajectory (the trial index).
  std::uint64_t stream_index = 0;
  bool allow_heterogeneous = false;
};

/// Every violated constraint, in a stable order. Empty means valid.
std::vector<std::string> validate(const LinearProcessConfig& cfg);

/// Initial box of the configuration (unit box when no sides were given).
LogBox initial_box(const LinearProcessConfig& cfg);

/// Trajectory boxes for steps 0..n_steps. Each step draws the m cuts in axis
/// order from the trajectory's own substream.
std::vector<LogBox> run_linear(const LinearProcessConfig& cfg);

/// Advances `box` by `steps` steps using `rng`; the hot-loop form of
/// run_linear used by the Monte Carlo drivers.
void advance_linear(LogBox& box,
                    std::span<const ProportionDistribution> axis_distributions,
                    std::size_t steps,
                    Engine& rng);

/// Law for axis i (shared law when only one is configured).
const ProportionDistribution& axis_distribution(std::span<const ProportionDistribution> laws, std::size_t axis);

/// Binary depth m * n above which a tree is not materialized in memory.
inline constexpr std::size_t kMaxInMemoryBinaryDepth = 24;

struct BranchTreeSpec
{
  std::size_t m = 1;
  ProportionDistribution dist = ProportionDistribution::uniform_unit();
  std::size_t n_levels = 1;
  std::vector<double> initial_log_sides;
  std::uint64_t seed = 0;
  std::uint64_t tree_index = 0;
  bool streaming = false;
};

std::vector<std::string> validate(const BranchTreeSpec& spec);

/// Depth-first walk over the (2^m)^n leaves of a branching-fragmentation
/// tree. Each level cuts every box along every axis in turn; both pieces
/// (p and 1 - p) are kept and every cut draws a fresh proportion. Memory is
/// O(m^2 n): one saved side vector per pending right sibling.
class BranchingTree
{
public:
  using CutSource = std::function<LogCut()>;

  /// Cuts drawn from spec.dist on substream (seed, tree_index).
  explicit BranchingTree(const BranchTreeSpec& spec);
  /// Cuts supplied by the caller in DFS order (left child first).
  BranchingTree(const BranchTreeSpec& spec, CutSource source);

  /// Advances to the next leaf. Returns false once every leaf was visited.
  bool next();

  std::span<const double> log_sides() const noexcept { return sides_; }
  double log_volume() const noexcept;
  std::uint64_t leaf_count() const noexcept { return leaf_count_; }
  std::uint64_t leaves_visited() const noexcept { return visited_; }

private:
  struct Pending
  {
    std::size_t depth;
    std::size_t axis;
    double log_complement;
    std::vector<double> parent_sides;
  };

  void descend(std::size_t depth);

  std::size_t m_;
  std::size_t binary_depth_;
  std::uint64_t leaf_count_;
  std::uint64_t visited_ = 0;
  bool started_ = false;
  std::vector<double> sides_;
  std::vector<Pending> stack_;
  std::optional<Engine> rng_;
  ProportionDistribution dist_;
  CutSource source_;
};

/// Streaming tree for the spec. Throws ConfigError on leaf-count overflow:
/// m * n above kMaxInMemoryBinaryDepth without streaming, or above 62.
BranchingTree run_branching(const BranchTreeSpec& spec);

/// All leaf log-volumes in DFS order (in-memory policy enforced).
std::vector<double> collect_leaf_log_volumes(const BranchTreeSpec& spec);

/// Fraction of values whose base-B significand is <= s, for s in [1, B].
double rho_statistic(std::span<const double> log_values, double s, double base);

/// Streams the remaining leaves of `tree` through rho_statistic.
double rho_statistic(BranchingTree& tree, double s, double base);

/// Streaming counter for several thresholds at once.
class RhoAccumulator
{
public:
  RhoAccumulator(std::vector<double> thresholds, double base);

  void add(double log_value);
  std::uint64_t count() const noexcept { return count_; }
  /// Fraction of added values with significand <= thresholds()[i].
  double fraction(std::size_t i) const;
  const std::vector<double>& thresholds() const noexcept { return thresholds_; }

private:
  std::vector<double> thresholds_;
  std::vector<double> log_thresholds_;
  std::vector<std::uint64_t> hits_;
  std::uint64_t count_ = 0;
};

} // namespace benfrag
