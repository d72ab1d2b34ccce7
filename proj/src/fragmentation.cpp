#include "benfrag/fragmentation.hpp"

#include "benfrag/errors.hpp"
#include "benfrag/significand.hpp"

#include <cmath>
#include <numeric>

namespace benfrag {

namespace {

void throw_if_invalid(const std::vector<std::string>& violations)
{
  if (violations.empty())
    return;
  std::string msg = violations.front();
  for (std::size_t i = 1; i < violations.size(); ++i)
    msg += "; " + violations[i];
  throw ConfigError(msg);
}

std::vector<double> initial_sides(std::size_t m, const std::vector<double>& given)
{
  return given.empty() ? std::vector<double>(m, 0.0) : given;
}

} // namespace

double LogBox::log_volume() const noexcept
{
  return std::accumulate(log_sides.begin(), log_sides.end(), 0.0);
}

LogBox step_linear(const LogBox& box, std::span<const double> cuts)
{
  if (cuts.size() != box.dimension())
    throw ConfigError("step_linear: cut count does not match the box dimension");
  LogBox next = box;
  for (std::size_t i = 0; i < cuts.size(); ++i)
    next.log_sides[i] += cuts[i];
  ++next.step;
  return next;
}

const ProportionDistribution& axis_distribution(std::span<const ProportionDistribution> laws, std::size_t axis)
{
  return laws.size() == 1 ? laws.front() : laws[axis];
}

std::vector<std::string> validate(const LinearProcessConfig& cfg)
{
  std::vector<std::string> v;
  if (cfg.m == 0)
    v.emplace_back("m must be >= 1");
  if (cfg.axis_distributions.empty())
    v.emplace_back("no proportion distribution given");
  else if (cfg.axis_distributions.size() != 1 && cfg.axis_distributions.size() != cfg.m)
    v.emplace_back("need one distribution or one per axis");
  else if (!cfg.allow_heterogeneous) {
    for (const auto& d : cfg.axis_distributions)
      if (!(d == cfg.axis_distributions.front())) {
        v.emplace_back("heterogeneous per-axis distributions require allow_heterogeneous "
                       "(all axes must share log-mean and log-variance)");
        break;
      }
  }
  if (!cfg.initial_log_sides.empty()) {
    if (cfg.initial_log_sides.size() != cfg.m)
      v.emplace_back("initial_log_sides must have m entries");
    for (double s : cfg.initial_log_sides)
      if (!std::isfinite(s)) {
        v.emplace_back("initial_log_sides must be finite");
        break;
      }
  }
  return v;
}

LogBox initial_box(const LinearProcessConfig& cfg)
{
  return LogBox{ initial_sides(cfg.m, cfg.initial_log_sides), 0 };
}

void advance_linear(LogBox& box,
                    std::span<const ProportionDistribution> axis_distributions,
                    std::size_t steps,
                    Engine& rng)
{
  const std::size_t m = box.dimension();
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t i = 0; i < m; ++i)
      box.log_sides[i] += axis_distribution(axis_distributions, i).sample_log(rng);
    ++box.step;
  }
}

std::vector<LogBox> run_linear(const LinearProcessConfig& cfg)
{
  throw_if_invalid(validate(cfg));
  Engine rng = make_stream(cfg.seed, cfg.stream_index);

  std::vector<LogBox> trajectory;
  trajectory.reserve(cfg.n_steps + 1);
  trajectory.push_back(initial_box(cfg));
  std::vector<double> cuts(cfg.m);
  for (std::size_t t = 0; t < cfg.n_steps; ++t) {
    for (std::size_t i = 0; i < cfg.m; ++i)
      cuts[i] = axis_distribution(cfg.axis_distributions, i).sample_log(rng);
    trajectory.push_back(step_linear(trajectory.back(), cuts));
  }
  return trajectory;
}

std::vector<std::string> validate(const BranchTreeSpec& spec)
{
  std::vector<std::string> v;
  if (spec.m == 0)
    v.emplace_back("m must be >= 1");
  if (spec.n_levels == 0)
    v.emplace_back("n must be >= 1");
  if (spec.dist.is_normalized())
    v.emplace_back("branching trees need genuine proportions in (0, 1)");
  if (!spec.initial_log_sides.empty() && spec.initial_log_sides.size() != spec.m)
    v.emplace_back("initial_log_sides must have m entries");

  const std::size_t depth = spec.m * spec.n_levels;
  if (depth > 62)
    v.emplace_back("2^" + std::to_string(depth) + " leaves overflow the leaf counter");
  else if (!spec.streaming && depth > kMaxInMemoryBinaryDepth)
    v.emplace_back("2^" + std::to_string(depth) + " leaves exceed in-memory cap");
  return v;
}

BranchingTree::BranchingTree(const BranchTreeSpec& spec)
  : BranchingTree(spec, CutSource{})
{
  rng_.emplace(make_stream(spec.seed, spec.tree_index));
}

BranchingTree::BranchingTree(const BranchTreeSpec& spec, CutSource source)
  : m_(spec.m)
  , binary_depth_(spec.m * spec.n_levels)
  , leaf_count_(0)
  , sides_(initial_sides(spec.m, spec.initial_log_sides))
  , dist_(spec.dist)
  , source_(std::move(source))
{
  auto violations = validate(spec);
  // The walker itself streams; only the counter limit applies here.
  std::erase_if(violations, [](const std::string& s) { return s.find("in-memory cap") != std::string::npos; });
  throw_if_invalid(violations);
  leaf_count_ = std::uint64_t{ 1 } << binary_depth_;
  stack_.reserve(binary_depth_);
}

void BranchingTree::descend(std::size_t depth)
{
  for (; depth < binary_depth_; ++depth) {
    const std::size_t axis = depth % m_;
    const LogCut cut = source_ ? source_() : dist_.sample_cut(*rng_);
    stack_.push_back(Pending{ depth + 1, axis, cut.log_complement, sides_ });
    sides_[axis] += cut.log_p;
  }
}

bool BranchingTree::next()
{
  if (!started_) {
    started_ = true;
    descend(0);
    ++visited_;
    return true;
  }
  if (stack_.empty())
    return false;

  Pending top = std::move(stack_.back());
  stack_.pop_back();
  sides_ = std::move(top.parent_sides);
  sides_[top.axis] += top.log_complement;
  descend(top.depth);
  ++visited_;
  return true;
}

double BranchingTree::log_volume() const noexcept
{
  return std::accumulate(sides_.begin(), sides_.end(), 0.0);
}

BranchingTree run_branching(const BranchTreeSpec& spec)
{
  throw_if_invalid(validate(spec));
  return BranchingTree(spec);
}

std::vector<double> collect_leaf_log_volumes(const BranchTreeSpec& spec)
{
  BranchTreeSpec in_memory = spec;
  in_memory.streaming = false;
  BranchingTree tree = run_branching(in_memory);
  std::vector<double> out;
  out.reserve(tree.leaf_count());
  while (tree.next())
    out.push_back(tree.log_volume());
  return out;
}

namespace {

double log_threshold(double s, double base)
{
  if (!(s >= 1.0 && s <= base))
    throw ConfigError("rho_statistic threshold s must lie in [1, B]");
  return benford_cdf(s, base);
}

} // namespace

double rho_statistic(std::span<const double> log_values, double s, double base)
{
  const double limit = log_threshold(s, base);
  if (log_values.empty())
    throw ConfigError("rho_statistic of an empty leaf set");
  std::uint64_t hits = 0;
  for (double v : log_values)
    hits += fractional_log(v) <= limit ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(log_values.size());
}

double rho_statistic(BranchingTree& tree, double s, double base)
{
  RhoAccumulator acc({ s }, base);
  while (tree.next())
    acc.add(tree.log_volume());
  return acc.fraction(0);
}

RhoAccumulator::RhoAccumulator(std::vector<double> thresholds, double base)
  : thresholds_(std::move(thresholds))
  , hits_(thresholds_.size(), 0)
{
  for (double s : thresholds_)
    log_thresholds_.push_back(log_threshold(s, base));
}

void RhoAccumulator::add(double log_value)
{
  const double u = fractional_log(log_value);
  for (std::size_t i = 0; i < log_thresholds_.size(); ++i)
    hits_[i] += u <= log_thresholds_[i] ? 1 : 0;
  ++count_;
}

double RhoAccumulator::fraction(std::size_t i) const
{
  if (count_ == 0)
    throw ConfigError("rho of an empty leaf set");
  return static_cast<double>(hits_[i]) / static_cast<double>(count_);
}

} // namespace benfrag
