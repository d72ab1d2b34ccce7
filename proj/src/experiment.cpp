#include "benfrag/experiment.hpp"

#include "benfrag/errors.hpp"
#include "benfrag/fragmentation.hpp"
#include "benfrag/frame.hpp"
#include "benfrag/parallel.hpp"
#include "benfrag/significand.hpp"
#include "benfrag/spectral.hpp"
#include "benfrag/wafer.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <variant>

namespace benfrag {

using nlohmann::json;

namespace {

constexpr std::array kCommandNames{ "simulate", "conformance", "wafer", "charfn", "mellin", "maxside", "branching" };

// ---------------------------------------------------------------- tables

using Cell = std::variant<double, std::int64_t, std::uint64_t, std::string>;

struct Table
{
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
  json summary = json::object();
};

std::string format_real(double v)
{
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_cell(const Cell& c)
{
  return std::visit(
    [](const auto& v) -> std::string {
      using T = std::decay_t<decltype(v)>;
      if constexpr (std::is_same_v<T, double>)
        return format_real(v);
      else if constexpr (std::is_same_v<T, std::string>)
        return v;
      else
        return std::to_string(v);
    },
    c);
}

json cell_json(const Cell& c)
{
  return std::visit(
    [](const auto& v) -> json {
      using T = std::decay_t<decltype(v)>;
      if constexpr (std::is_same_v<T, double>) {
        if (!std::isfinite(v))
          return format_real(v);
      }
      return v;
    },
    c);
}

std::string render_csv(const Table& t)
{
  std::string out;
  for (std::size_t i = 0; i < t.header.size(); ++i)
    out += (i ? "," : "") + t.header[i];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out += (i ? "," : "") + format_cell(row[i]);
    out += '\n';
  }
  return out;
}

std::string render_json(const ExperimentConfig& cfg, const Table& t)
{
  json doc;
  doc["command"] = to_string(cfg.command);
  doc["columns"] = t.header;
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::object();
    for (std::size_t i = 0; i < row.size(); ++i)
      r[t.header[i]] = cell_json(row[i]);
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  doc["summary"] = t.summary;
  return doc.dump(2) + "\n";
}

std::string render(const ExperimentConfig& cfg, const Table& t)
{
  return cfg.output_format == "json" ? render_json(cfg, t) : render_csv(t);
}

json finite_or_string(double v)
{
  return std::isfinite(v) ? json(v) : json(format_real(v));
}

// ---------------------------------------------------------------- config plumbing

std::vector<ProportionDistribution> axis_laws(const ExperimentConfig& cfg)
{
  if (cfg.axis_distributions.empty())
    return { make_distribution(cfg.distribution, cfg.base) };
  std::vector<ProportionDistribution> laws;
  for (const auto& spec : cfg.axis_distributions)
    laws.push_back(make_distribution(spec, cfg.base));
  return laws;
}

bool uses_branching(const ExperimentConfig& cfg)
{
  return cfg.command == Command::branching || cfg.mode == "branching";
}

LinearProcessConfig linear_config(const ExperimentConfig& cfg)
{
  LinearProcessConfig lc;
  lc.m = cfg.m;
  lc.axis_distributions = axis_laws(cfg);
  lc.n_steps = cfg.n;
  lc.initial_log_sides = cfg.initial_log_sides;
  lc.seed = cfg.seed;
  lc.allow_heterogeneous = cfg.allow_heterogeneous;
  return lc;
}

BranchTreeSpec tree_spec(const ExperimentConfig& cfg, std::uint64_t tree)
{
  BranchTreeSpec spec;
  spec.m = cfg.m;
  spec.dist = make_distribution(cfg.distribution, cfg.base);
  spec.n_levels = cfg.n;
  spec.initial_log_sides = cfg.initial_log_sides;
  spec.seed = cfg.seed;
  spec.tree_index = tree;
  spec.streaming = cfg.streaming;
  return spec;
}

WaferConfig wafer_config(const ExperimentConfig& cfg)
{
  WaferConfig wc;
  wc.m = cfg.m;
  wc.d = cfg.d;
  wc.n_steps = cfg.n;
  wc.trials = cfg.trials;
  wc.seed = cfg.seed;
  wc.schedule = cfg.delta_schedule == "decaying" ? DeltaSchedule::decaying : DeltaSchedule::fixed;
  wc.delta = cfg.delta;
  wc.base = cfg.base;
  wc.dist = make_distribution(cfg.distribution, cfg.base);
  wc.initial_log_sides = cfg.initial_log_sides;
  wc.workers = cfg.workers;
  return wc;
}

SpectralProfile spectral_profile(const ExperimentConfig& cfg)
{
  SpectralProfile p;
  p.n = cfg.n;
  p.epsilon = cfg.epsilon;
  p.k_max = cfg.k_max;
  return p;
}

void throw_if_invalid(const std::vector<std::string>& v)
{
  if (v.empty())
    return;
  std::string msg = v.front();
  for (std::size_t i = 1; i < v.size(); ++i)
    msg += "; " + v[i];
  throw ConfigError(msg);
}

// ---------------------------------------------------------------- pipelines

// Final box of every trial; trial t draws from substream (seed, t).
std::vector<LogBox> final_boxes(const ExperimentConfig& cfg)
{
  const LinearProcessConfig lc = linear_config(cfg);
  throw_if_invalid(validate(lc));
  return parallel_map(cfg.trials, cfg.workers, [&](std::size_t t) {
    Engine rng = make_stream(cfg.seed, t);
    LogBox box = initial_box(lc);
    advance_linear(box, lc.axis_distributions, cfg.n, rng);
    return box;
  });
}

std::vector<double> leaf_volumes(const ExperimentConfig& cfg)
{
  auto per_tree = parallel_map(cfg.trials, cfg.workers, [&](std::size_t t) {
    BranchingTree tree = run_branching(tree_spec(cfg, t));
    std::vector<double> leaves;
    while (tree.next())
      leaves.push_back(tree.log_volume());
    return leaves;
  });
  std::vector<double> all;
  for (auto& leaves : per_tree)
    all.insert(all.end(), leaves.begin(), leaves.end());
  return all;
}

std::vector<double> frame_log_volumes(const ExperimentConfig& cfg)
{
  const auto boxes = final_boxes(cfg);
  std::vector<double> out;
  out.reserve(boxes.size());
  for (const auto& box : boxes)
    out.push_back(frame_volumes(box, cfg.d, cfg.base, false).log_Vd);
  return out;
}

Table simulate_table(const ExperimentConfig& cfg)
{
  Table t;
  if (uses_branching(cfg)) {
    t.header = { "tree", "leaf", "log_volume" };
    for (std::size_t tree = 0; tree < cfg.trials; ++tree) {
      const auto leaves = collect_leaf_log_volumes(tree_spec(cfg, tree));
      for (std::size_t i = 0; i < leaves.size(); ++i)
        t.rows.push_back({ std::uint64_t{ tree }, std::uint64_t{ i }, leaves[i] });
    }
    return t;
  }
  t.header = { "trial", "log_volume", "log_Vd", "log_max", "gap", "significand_Vd" };
  const auto boxes = final_boxes(cfg);
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const FrameVolumes fv = frame_volumes(boxes[i], cfg.d, cfg.base, false);
    t.rows.push_back({ std::uint64_t{ i },
                       boxes[i].log_volume(),
                       fv.log_Vd,
                       fv.log_max,
                       fv.gap,
                       significand_from_log(fv.log_Vd, cfg.base) });
  }
  return t;
}

Table conformance_table(const ExperimentConfig& cfg, std::vector<double>* significands)
{
  std::vector<double> logs = uses_branching(cfg) ? leaf_volumes(cfg) : frame_log_volumes(cfg);
  const SignificandSample sample(std::move(logs), cfg.base);
  const BenfordReport r = conformance(sample);
  if (significands)
    *significands = sample.significands();

  Table t;
  t.header = { "statistic", "value", "sample_size", "base" };
  auto add = [&](const std::string& name, double v) {
    t.rows.push_back({ name, v, std::uint64_t{ r.sample_size }, r.base });
    t.summary[name] = finite_or_string(v);
  };
  add("ks_distance", r.ks_distance);
  if (r.chi2_first_digit)
    add("chi2_first_digit", *r.chi2_first_digit);
  if (r.mad_digits)
    add("mad_digits", *r.mad_digits);
  if (r.digit_frequencies)
    for (std::size_t i = 0; i < 9; ++i)
      add("digit_frequency_" + std::to_string(i + 1), (*r.digit_frequencies)[i]);
  return t;
}

Table wafer_table(const ExperimentConfig& cfg)
{
  std::vector<std::size_t> steps = cfg.n_values.empty() ? std::vector<std::size_t>{ cfg.n } : cfg.n_values;
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  const WaferReport report = wafer_decay(wafer_config(cfg), steps);

  Table t;
  t.header = { "n", "delta", "p_wafer", "p_overflow", "mean_gap", "median_gap", "alpha_n", "trials", "seed" };
  for (const auto& r : report.decay_table)
    t.rows.push_back({ std::uint64_t{ r.n },
                       r.delta,
                       r.p_wafer,
                       r.p_overflow,
                       r.mean_gap,
                       r.median_gap,
                       r.alpha_n,
                       std::uint64_t{ r.trials },
                       r.seed });
  if (report.decay_table.size() >= 2) {
    try {
      t.summary["decay_slope"] = fit_decay_slope(report.decay_table).slope;
    } catch (const NumericalError&) {
      t.summary["decay_slope"] = nullptr;
    }
  }
  return t;
}

Table charfn_table(const ExperimentConfig& cfg)
{
  const auto grid = uniform_grid(cfg.x_min, cfg.x_max, cfg.x_step);
  const InversionResult r = invert_char_fn(spectral_profile(cfg), make_distribution(cfg.distribution, cfg.base), grid);
  Table t;
  t.header = { "x", "f_n", "phi", "abs_err" };
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    const double phi = std_normal_pdf(r.x[i]);
    t.rows.push_back({ r.x[i], r.density[i], phi, std::abs(r.density[i] - phi) });
  }
  t.summary["k_max"] = r.k_max;
  t.summary["step"] = r.step;
  t.summary["nodes"] = r.nodes;
  t.summary["last_change"] = r.last_change;
  t.summary["max_imag_residual"] = r.max_imag_residual;
  t.summary["tail_bound"] = finite_or_string(r.tail_bound);
  return t;
}

Table mellin_table(const ExperimentConfig& cfg)
{
  const MellinGrid grid = cfg.mellin_grid == "char_fn" ? MellinGrid::char_fn : MellinGrid::original;
  const MellinResult r = mellin_condition_sum(make_distribution(cfg.distribution, cfg.base), cfg.n, cfg.ell_max, grid);
  Table t;
  t.header = { "ell", "term_modulus", "partial_sum" };
  for (const auto& term : r.terms)
    t.rows.push_back({ std::int64_t{ term.ell }, term.term_modulus, term.partial_sum });
  t.summary["sum"] = r.sum;
  t.summary["largest_term"] = r.largest_term;
  t.summary["tail_bound"] = finite_or_string(r.tail_bound);
  t.summary["tail_certified"] = r.tail_certified;
  return t;
}

Table maxside_table(const ExperimentConfig& cfg)
{
  const WindowSet window{ cfg.window_a, cfg.window_b, cfg.n };
  const ProportionDistribution dist = make_distribution(cfg.distribution, cfg.base);

  Table t;
  t.header = { "method", "m", "n", "a", "b", "probability" };
  auto add = [&](const char* method, double p) {
    t.rows.push_back({ std::string(method), std::uint64_t{ cfg.m }, std::uint64_t{ cfg.n }, cfg.window_a, cfg.window_b, p });
    t.summary[method] = p;
  };
  add("gaussian", window_probability(MaxDensityModel::gaussian(cfg.m), window));

  const auto grid = uniform_grid(cfg.x_min, cfg.x_max, cfg.x_step);
  const InversionResult inv = invert_char_fn(spectral_profile(cfg), dist, grid);
  add("numeric", window_probability(MaxDensityModel::numeric(cfg.m, inv), window));

  if (!dist.is_normalized()) {
    const auto boxes = final_boxes(cfg);
    std::vector<double> hits;
    hits.reserve(boxes.size());
    for (const auto& box : boxes) {
      const double top = *std::max_element(box.log_sides.begin(), box.log_sides.end());
      const double u = fractional_log(top);
      hits.push_back(u >= cfg.window_a && u < cfg.window_b ? 1.0 : 0.0);
    }
    add("monte_carlo", pairwise_sum(hits) / static_cast<double>(hits.size()));
  }
  return t;
}

Table branching_table(const ExperimentConfig& cfg)
{
  const auto per_tree = parallel_map(cfg.trials, cfg.workers, [&](std::size_t tree) {
    BranchingTree walker = run_branching(tree_spec(cfg, tree));
    RhoAccumulator acc(cfg.s_values, cfg.base);
    while (walker.next())
      acc.add(walker.log_volume());
    std::vector<double> rho(cfg.s_values.size());
    for (std::size_t i = 0; i < rho.size(); ++i)
      rho[i] = acc.fraction(i);
    return rho;
  });

  Table t;
  t.header = { "s", "mean_rho", "benford_cdf", "abs_err", "trees", "leaves_per_tree" };
  const std::uint64_t leaves = std::uint64_t{ 1 } << (cfg.m * cfg.n);
  for (std::size_t i = 0; i < cfg.s_values.size(); ++i) {
    std::vector<double> column(per_tree.size());
    for (std::size_t k = 0; k < per_tree.size(); ++k)
      column[k] = per_tree[k][i];
    const double mean = pairwise_sum(column) / static_cast<double>(column.size());
    const double target = benford_cdf(cfg.s_values[i], cfg.base);
    t.rows.push_back({ cfg.s_values[i], mean, target, std::abs(mean - target), std::uint64_t{ cfg.trials }, leaves });
  }
  return t;
}

struct Output
{
  std::string path;
  std::string content;
};

std::vector<Output> produce(const ExperimentConfig& cfg)
{
  std::vector<Output> out;
  switch (cfg.command) {
    case Command::simulate:
      out.push_back({ cfg.output_path, render(cfg, simulate_table(cfg)) });
      break;
    case Command::conformance: {
      std::vector<double> significands;
      out.push_back({ cfg.output_path,
                      render(cfg, conformance_table(cfg, cfg.dump_significands ? &significands : nullptr)) });
      if (cfg.dump_significands) {
        Table dump;
        dump.header = { "significand" };
        for (double s : significands)
          dump.rows.push_back({ s });
        out.push_back({ cfg.output_path + ".significands." + cfg.output_format, render(cfg, dump) });
      }
      break;
    }
    case Command::wafer:
      out.push_back({ cfg.output_path, render(cfg, wafer_table(cfg)) });
      break;
    case Command::charfn:
      out.push_back({ cfg.output_path, render(cfg, charfn_table(cfg)) });
      break;
    case Command::mellin:
      out.push_back({ cfg.output_path, render(cfg, mellin_table(cfg)) });
      break;
    case Command::maxside:
      out.push_back({ cfg.output_path, render(cfg, maxside_table(cfg)) });
      break;
    case Command::branching:
      out.push_back({ cfg.output_path, render(cfg, branching_table(cfg)) });
      break;
  }
  return out;
}

void write_file(const std::string& path, const std::string& content)
{
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f)
    throw IoError("cannot open " + path + " for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  f.close();
  if (!f)
    throw IoError("failed writing " + path);
}

// ---------------------------------------------------------------- JSON schema

json spec_to_json(const DistributionSpec& s)
{
  return json{ { "family", s.family }, { "a", s.a }, { "b", s.b }, { "alpha", s.alpha }, { "beta", s.beta } };
}

template<class T>
void read(const json& obj, const char* key, T& field)
{
  if (auto it = obj.find(key); it != obj.end())
    field = it->template get<T>();
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known, const std::string& where)
{
  if (!obj.is_object())
    throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("unknown key \"" + key + "\" in " + where);
}

DistributionSpec spec_from_json(const json& obj)
{
  reject_unknown(obj, { "family", "a", "b", "alpha", "beta" }, "distribution");
  DistributionSpec s;
  read(obj, "family", s.family);
  read(obj, "a", s.a);
  read(obj, "b", s.b);
  read(obj, "alpha", s.alpha);
  read(obj, "beta", s.beta);
  return s;
}

json config_json(const ExperimentConfig& c)
{
  json axes = json::array();
  for (const auto& s : c.axis_distributions)
    axes.push_back(spec_to_json(s));
  return json{ { "command", to_string(c.command) },
               { "mode", c.mode },
               { "m", c.m },
               { "d", c.d },
               { "n", c.n },
               { "trials", c.trials },
               { "seed", c.seed },
               { "base", c.base },
               { "streaming", c.streaming },
               { "distribution", spec_to_json(c.distribution) },
               { "axis_distributions", axes },
               { "allow_heterogeneous", c.allow_heterogeneous },
               { "initial_log_sides", c.initial_log_sides },
               { "delta_schedule", c.delta_schedule },
               { "delta", c.delta },
               { "n_values", c.n_values },
               { "epsilon", c.epsilon },
               { "k_max", c.k_max },
               { "x_min", c.x_min },
               { "x_max", c.x_max },
               { "x_step", c.x_step },
               { "ell_max", c.ell_max },
               { "mellin_grid", c.mellin_grid },
               { "window_a", c.window_a },
               { "window_b", c.window_b },
               { "s_values", c.s_values },
               { "dump_significands", c.dump_significands },
               { "output_path", c.output_path },
               { "output_format", c.output_format },
               { "workers", c.workers } };
}

} // namespace

std::string to_string(Command c)
{
  return kCommandNames[static_cast<std::size_t>(c)];
}

Command parse_command(std::string_view name)
{
  for (std::size_t i = 0; i < kCommandNames.size(); ++i)
    if (name == kCommandNames[i])
      return static_cast<Command>(i);
  throw ConfigError("unknown command \"" + std::string(name) + "\"");
}

ProportionDistribution make_distribution(const DistributionSpec& spec, double base)
{
  if (spec.family == "uniform")
    return ProportionDistribution::uniform_unit(base);
  if (spec.family == "loguniform")
    return ProportionDistribution::log_uniform(spec.a, spec.b, base);
  if (spec.family == "normalized_loguniform")
    return ProportionDistribution::normalized_log_uniform(base);
  if (spec.family == "beta")
    return ProportionDistribution::beta(spec.alpha, spec.beta, base);
  throw ConfigError("unknown distribution family \"" + spec.family + "\"");
}

ExperimentConfig config_from_json(std::string_view text)
{
  try {
    const json obj = json::parse(text);
    reject_unknown(obj,
                   { "command",     "mode",          "m",
                     "d",           "n",             "trials",
                     "seed",        "base",          "streaming",
                     "distribution", "axis_distributions", "allow_heterogeneous",
                     "initial_log_sides", "delta_schedule", "delta",
                     "n_values",    "epsilon",       "k_max",
                     "x_min",       "x_max",         "x_step",
                     "ell_max",     "mellin_grid",   "window_a",
                     "window_b",    "s_values",      "dump_significands",
                     "output_path", "output_format", "workers" },
                   "config");
    ExperimentConfig c;
    if (auto it = obj.find("command"); it != obj.end())
      c.command = parse_command(it->get<std::string>());
    read(obj, "mode", c.mode);
    read(obj, "m", c.m);
    read(obj, "d", c.d);
    read(obj, "n", c.n);
    read(obj, "trials", c.trials);
    read(obj, "seed", c.seed);
    read(obj, "base", c.base);
    read(obj, "streaming", c.streaming);
    if (auto it = obj.find("distribution"); it != obj.end())
      c.distribution = spec_from_json(*it);
    if (auto it = obj.find("axis_distributions"); it != obj.end()) {
      if (!it->is_array())
        throw ConfigError("axis_distributions must be an array");
      for (const auto& s : *it)
        c.axis_distributions.push_back(spec_from_json(s));
    }
    read(obj, "allow_heterogeneous", c.allow_heterogeneous);
    read(obj, "initial_log_sides", c.initial_log_sides);
    read(obj, "delta_schedule", c.delta_schedule);
    read(obj, "delta", c.delta);
    read(obj, "n_values", c.n_values);
    read(obj, "epsilon", c.epsilon);
    read(obj, "k_max", c.k_max);
    read(obj, "x_min", c.x_min);
    read(obj, "x_max", c.x_max);
    read(obj, "x_step", c.x_step);
    read(obj, "ell_max", c.ell_max);
    read(obj, "mellin_grid", c.mellin_grid);
    read(obj, "window_a", c.window_a);
    read(obj, "window_b", c.window_b);
    read(obj, "s_values", c.s_values);
    read(obj, "dump_significands", c.dump_significands);
    read(obj, "output_path", c.output_path);
    read(obj, "output_format", c.output_format);
    read(obj, "workers", c.workers);
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

std::string config_to_json(const ExperimentConfig& cfg)
{
  return config_json(cfg).dump(2) + "\n";
}

ExperimentConfig load_config(const std::string& path)
{
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw IoError("cannot read config " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return config_from_json(buf.str());
}

std::vector<std::string> validate(const ExperimentConfig& cfg)
{
  std::vector<std::string> v;
  auto append = [&](const std::vector<std::string>& more) { v.insert(v.end(), more.begin(), more.end()); };

  if (cfg.mode != "linear" && cfg.mode != "branching")
    v.emplace_back("mode must be linear or branching");
  if (cfg.trials == 0)
    v.emplace_back("trials must be >= 1");
  if (cfg.m == 0)
    v.emplace_back("m must be >= 1");
  if (cfg.d == 0)
    v.emplace_back("d must be >= 1");
  if (cfg.d > cfg.m)
    v.emplace_back("d exceeds m");
  if (!(cfg.base > 1.0) || !std::isfinite(cfg.base))
    v.emplace_back("base must be a finite real > 1");
  if (cfg.delta_schedule != "fixed" && cfg.delta_schedule != "decaying")
    v.emplace_back("delta_schedule must be fixed or decaying");
  if (cfg.delta_schedule == "fixed" && !(cfg.delta > 0.0 && cfg.delta < 1.0))
    v.emplace_back("delta must lie in (0, 1)");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 0.125))
    v.emplace_back("epsilon must lie in (0, 1/8)");
  if (cfg.mellin_grid != "original" && cfg.mellin_grid != "char_fn")
    v.emplace_back("mellin_grid must be original or char_fn");
  if (cfg.output_format != "csv" && cfg.output_format != "json")
    v.emplace_back("output_format must be csv or json");
  if (cfg.output_path.empty())
    v.emplace_back("output_path must be non-empty");
  if (cfg.ell_max < 1)
    v.emplace_back("ell_max must be >= 1");
  if (!(cfg.x_step > 0.0) || !(cfg.x_max > cfg.x_min))
    v.emplace_back("inversion grid needs x_step > 0 and x_max > x_min");
  if (!(cfg.window_a >= 0.0 && cfg.window_a < cfg.window_b && cfg.window_b <= 1.0))
    v.emplace_back("window needs 0 <= window_a < window_b <= 1");
  for (double s : cfg.s_values)
    if (!(s >= 1.0 && s <= cfg.base)) {
      v.emplace_back("s_values must lie in [1, base]");
      break;
    }
  for (std::size_t n : cfg.n_values)
    if (n == 0) {
      v.emplace_back("n_values must be >= 1");
      break;
    }

  std::vector<DistributionSpec> specs{ cfg.distribution };
  specs.insert(specs.end(), cfg.axis_distributions.begin(), cfg.axis_distributions.end());
  bool laws_ok = std::isfinite(cfg.base) && cfg.base > 1.0;
  for (const auto& s : specs) {
    try {
      if (laws_ok)
        make_distribution(s, cfg.base);
    } catch (const std::exception& e) {
      v.emplace_back(std::string("distribution: ") + e.what());
      laws_ok = false;
    }
  }
  if (!laws_ok || cfg.m == 0)
    return v;

  if ((cfg.command == Command::charfn || cfg.command == Command::maxside) && cfg.n >= 1 && cfg.epsilon > 0.0 &&
      cfg.epsilon < 0.125)
    append(validate(spectral_profile(cfg)));

  if (uses_branching(cfg)) {
    if (!cfg.axis_distributions.empty())
      v.emplace_back("branching trees use a single distribution");
    append(validate(tree_spec(cfg, 0)));
  } else if (cfg.command == Command::simulate || cfg.command == Command::conformance ||
             cfg.command == Command::maxside) {
    LinearProcessConfig lc;
    lc.m = cfg.m;
    lc.axis_distributions = axis_laws(cfg);
    lc.initial_log_sides = cfg.initial_log_sides;
    lc.allow_heterogeneous = cfg.allow_heterogeneous;
    append(validate(lc));
  } else if (!cfg.axis_distributions.empty()) {
    v.emplace_back("axis_distributions apply to linear simulate, conformance and maxside runs only");
  }
  if (cfg.command == Command::wafer && !cfg.initial_log_sides.empty() && cfg.initial_log_sides.size() != cfg.m)
    v.emplace_back("initial_log_sides must have m entries");
  return v;
}

std::string render_result(const ExperimentConfig& cfg)
{
  throw_if_invalid(validate(cfg));
  return produce(cfg).front().content;
}

std::string sha256_hex(std::string_view bytes)
{
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw IoError("SHA-256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

std::string manifest_to_json(const RunManifest& m)
{
  json stages = json::object();
  for (const auto& s : m.stages)
    stages[s.stage] = s.seconds;
  json results = json::array();
  for (const auto& r : m.results)
    results.push_back({ { "path", r.path }, { "sha256", r.sha256 } });
  const json doc{ { "config", config_json(m.config) },
                  { "version", m.version },
                  { "wall_clock_seconds", m.wall_clock_seconds },
                  { "stage_seconds", stages },
                  { "seed", m.seed },
                  { "results", results } };
  return doc.dump(2) + "\n";
}

RunManifest run(const ExperimentConfig& cfg)
{
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto seconds_since = [](clock::time_point t) { return std::chrono::duration<double>(clock::now() - t).count(); };

  RunManifest manifest;
  manifest.config = cfg;
  manifest.seed = cfg.seed;

  auto stage = clock::now();
  throw_if_invalid(validate(cfg));
  manifest.stages.push_back({ "validate", seconds_since(stage) });

  stage = clock::now();
  const auto outputs = produce(cfg);
  manifest.stages.push_back({ "compute", seconds_since(stage) });

  stage = clock::now();
  for (const auto& o : outputs) {
    write_file(o.path, o.content);
    manifest.results.push_back({ o.path, sha256_hex(o.content) });
  }
  manifest.stages.push_back({ "write", seconds_since(stage) });

  manifest.wall_clock_seconds = seconds_since(start);
  write_file(cfg.output_path + ".manifest.json", manifest_to_json(manifest));
  return manifest;
}

} // namespace benfrag
