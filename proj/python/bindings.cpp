#include "benfrag/distributions.hpp"
#include "benfrag/errors.hpp"
#include "benfrag/experiment.hpp"
#include "benfrag/fragmentation.hpp"
#include "benfrag/frame.hpp"
#include "benfrag/significand.hpp"
#include "benfrag/spectral.hpp"
#include "benfrag/wafer.hpp"

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace benfrag;

namespace {

std::vector<double> leaf_log_volumes(std::size_t m, const ProportionDistribution& dist, std::size_t n_levels,
                                     std::uint64_t seed, std::uint64_t tree_index)
{
  BranchTreeSpec spec;
  spec.m = m;
  spec.dist = dist;
  spec.n_levels = n_levels;
  spec.seed = seed;
  spec.tree_index = tree_index;
  return collect_leaf_log_volumes(spec);
}

std::vector<double> tree_rho(std::size_t m, const ProportionDistribution& dist, std::size_t n_levels,
                             std::vector<double> s_values, std::uint64_t seed, std::uint64_t tree_index)
{
  BranchTreeSpec spec;
  spec.m = m;
  spec.dist = dist;
  spec.n_levels = n_levels;
  spec.seed = seed;
  spec.tree_index = tree_index;
  spec.streaming = true;
  BranchingTree tree = run_branching(spec);
  const double base = dist.base();
  RhoAccumulator acc(std::move(s_values), base);
  while (tree.next())
    acc.add(tree.log_volume());
  std::vector<double> out;
  for (std::size_t i = 0; i < acc.thresholds().size(); ++i)
    out.push_back(acc.fraction(i));
  return out;
}

} // namespace

PYBIND11_MODULE(_benfrag, m)
{
  m.doc() = "Box-fragmentation processes and Benford checks";
  m.attr("__version__") = kVersion;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<LogMoments>(m, "LogMoments")
    .def_readonly("mu_p", &LogMoments::mu_p)
    .def_readonly("sigma_p2", &LogMoments::sigma_p2)
    .def_readonly("rho3", &LogMoments::rho3);

  py::class_<ProportionDistribution>(m, "ProportionDistribution")
    .def_static("uniform_unit", &ProportionDistribution::uniform_unit, py::arg("base") = 10.0)
    .def_static("log_uniform", &ProportionDistribution::log_uniform, py::arg("a"), py::arg("b"), py::arg("base") = 10.0)
    .def_static("normalized_log_uniform", &ProportionDistribution::normalized_log_uniform, py::arg("base") = 10.0)
    .def_static("beta", &ProportionDistribution::beta, py::arg("alpha"), py::arg("beta"), py::arg("base") = 10.0)
    .def_property_readonly("base", &ProportionDistribution::base)
    .def_property_readonly("is_normalized", &ProportionDistribution::is_normalized)
    .def("log_moments", &ProportionDistribution::log_moments)
    .def("log_char_fn", [](const ProportionDistribution& d, double omega) { return d.log_char_fn(omega); })
    .def("sample_log",
         [](const ProportionDistribution& d, std::size_t count, std::uint64_t seed, std::uint64_t stream) {
           Engine rng = make_stream(seed, stream);
           std::vector<double> out(count);
           for (auto& x : out)
             x = d.sample_log(rng);
           return out;
         },
         py::arg("count"), py::arg("seed") = 0, py::arg("stream") = 0);

  m.def("char_fn_normalized",
        [](const ProportionDistribution& d, std::size_t n, double k) { return char_fn_normalized(d, n, k); },
        py::arg("dist"), py::arg("n"), py::arg("k"));
  m.def("sinc", &sinc);

  m.def("run_linear",
        [](std::size_t dim, const ProportionDistribution& dist, std::size_t n_steps, std::uint64_t seed,
           std::uint64_t stream) {
          LinearProcessConfig cfg;
          cfg.m = dim;
          cfg.axis_distributions = { dist };
          cfg.n_steps = n_steps;
          cfg.seed = seed;
          cfg.stream_index = stream;
          std::vector<std::vector<double>> out;
          for (const auto& box : run_linear(cfg))
            out.push_back(box.log_sides);
          return out;
        },
        py::arg("m"), py::arg("dist"), py::arg("n_steps"), py::arg("seed") = 0, py::arg("stream") = 0,
        "Log-sides of the trajectory boxes for steps 0..n_steps.");
  m.def("leaf_log_volumes", &leaf_log_volumes, py::arg("m"), py::arg("dist"), py::arg("n_levels"),
        py::arg("seed") = 0, py::arg("tree_index") = 0);
  m.def("tree_rho", &tree_rho, py::arg("m"), py::arg("dist"), py::arg("n_levels"), py::arg("s_values"),
        py::arg("seed") = 0, py::arg("tree_index") = 0,
        "Fraction of leaves with significand <= s, streamed over the tree.");

  py::class_<FrameVolumes>(m, "FrameVolumes")
    .def_readonly("m", &FrameVolumes::m)
    .def_readonly("d", &FrameVolumes::d)
    .def_readonly("log_vd", &FrameVolumes::log_vd)
    .def_readonly("log_Vd", &FrameVolumes::log_Vd)
    .def_readonly("log_max", &FrameVolumes::log_max)
    .def_readonly("argmax_subset", &FrameVolumes::argmax_subset)
    .def_readonly("gap", &FrameVolumes::gap)
    .def("wafer_excess", &FrameVolumes::wafer_excess);
  m.def("frame_volumes",
        [](const std::vector<double>& log_sides, std::size_t d, double base) {
          return frame_volumes(log_sides, d, base, false);
        },
        py::arg("log_sides"), py::arg("d"), py::arg("base") = 10.0);
  m.def("log_add_exp", &log_add_exp, py::arg("x"), py::arg("y"), py::arg("base") = 10.0);

  m.def("significand_from_log", &significand_from_log, py::arg("log_value"), py::arg("base") = 10.0);
  m.def("benford_cdf", &benford_cdf, py::arg("significand"), py::arg("base") = 10.0);

  py::class_<BenfordReport>(m, "BenfordReport")
    .def_readonly("ks_distance", &BenfordReport::ks_distance)
    .def_readonly("chi2_first_digit", &BenfordReport::chi2_first_digit)
    .def_readonly("digit_frequencies", &BenfordReport::digit_frequencies)
    .def_readonly("mad_digits", &BenfordReport::mad_digits)
    .def_readonly("sample_size", &BenfordReport::sample_size)
    .def_readonly("base", &BenfordReport::base);
  m.def("conformance",
        [](std::vector<double> log_values, double base) {
          return conformance(SignificandSample(std::move(log_values), base));
        },
        py::arg("log_values"), py::arg("base") = 10.0);

  py::enum_<DeltaSchedule>(m, "DeltaSchedule")
    .value("fixed", DeltaSchedule::fixed)
    .value("decaying", DeltaSchedule::decaying);

  py::class_<WaferConfig>(m, "WaferConfig")
    .def(py::init<>())
    .def_readwrite("m", &WaferConfig::m)
    .def_readwrite("d", &WaferConfig::d)
    .def_readwrite("n_steps", &WaferConfig::n_steps)
    .def_readwrite("trials", &WaferConfig::trials)
    .def_readwrite("seed", &WaferConfig::seed)
    .def_readwrite("schedule", &WaferConfig::schedule)
    .def_readwrite("delta", &WaferConfig::delta)
    .def_readwrite("base", &WaferConfig::base)
    .def_readwrite("dist", &WaferConfig::dist)
    .def_readwrite("initial_log_sides", &WaferConfig::initial_log_sides)
    .def_readwrite("workers", &WaferConfig::workers);

  py::class_<WaferRow>(m, "WaferRow")
    .def_readonly("n", &WaferRow::n)
    .def_readonly("delta", &WaferRow::delta)
    .def_readonly("p_wafer", &WaferRow::p_wafer)
    .def_readonly("p_overflow", &WaferRow::p_overflow)
    .def_readonly("mean_gap", &WaferRow::mean_gap)
    .def_readonly("median_gap", &WaferRow::median_gap)
    .def_readonly("min_gap", &WaferRow::min_gap)
    .def_readonly("alpha_n", &WaferRow::alpha_n)
    .def_readonly("p_gap_above_alpha", &WaferRow::p_gap_above_alpha)
    .def_readonly("trials", &WaferRow::trials);

  py::class_<WaferReport>(m, "WaferReport")
    .def_readonly("summary", &WaferReport::summary)
    .def_readonly("decay_table", &WaferReport::decay_table);

  m.def("wafer_probability", &wafer_probability, py::arg("cfg"), py::call_guard<py::gil_scoped_release>());
  m.def("wafer_decay",
        [](const WaferConfig& cfg, const std::vector<std::size_t>& steps) { return wafer_decay(cfg, steps); },
        py::arg("cfg"), py::arg("steps"), py::call_guard<py::gil_scoped_release>());
  m.def("decay_slope",
        [](const std::vector<WaferRow>& rows) { return fit_decay_slope(rows).slope; }, py::arg("rows"));
  m.def("gap_median", [](const WaferConfig& cfg) { return gap_distribution(cfg).median; }, py::arg("cfg"));
  m.def("overflow_probability", &overflow_probability, py::arg("cfg"));

  m.def("std_normal_pdf", &std_normal_pdf);
  m.def("std_normal_cdf", &std_normal_cdf);

  py::class_<InversionResult>(m, "InversionResult")
    .def_readonly("x", &InversionResult::x)
    .def_readonly("density", &InversionResult::density)
    .def_readonly("k_max", &InversionResult::k_max)
    .def_readonly("step", &InversionResult::step)
    .def_readonly("last_change", &InversionResult::last_change)
    .def_readonly("tail_bound", &InversionResult::tail_bound);
  m.def("invert_char_fn",
        [](const ProportionDistribution& dist, std::size_t n, const std::vector<double>& x, double epsilon) {
          SpectralProfile p;
          p.n = n;
          p.epsilon = epsilon;
          return invert_char_fn(p, dist, x);
        },
        py::arg("dist"), py::arg("n"), py::arg("x"), py::arg("epsilon") = 0.1);
  m.def("window_probability_gaussian",
        [](std::size_t dim, double a, double b, std::size_t n) {
          return window_probability(MaxDensityModel::gaussian(dim), WindowSet{ a, b, n });
        },
        py::arg("m"), py::arg("a"), py::arg("b"), py::arg("n"));

  py::enum_<MellinGrid>(m, "MellinGrid")
    .value("original", MellinGrid::original)
    .value("char_fn", MellinGrid::char_fn);
  py::class_<MellinResult>(m, "MellinResult")
    .def_readonly("sum", &MellinResult::sum)
    .def_readonly("largest_term", &MellinResult::largest_term)
    .def_readonly("tail_bound", &MellinResult::tail_bound)
    .def_readonly("tail_certified", &MellinResult::tail_certified)
    .def_property_readonly("terms", [](const MellinResult& r) {
      std::vector<std::tuple<int, double, double>> out;
      for (const auto& t : r.terms)
        out.emplace_back(t.ell, t.term_modulus, t.partial_sum);
      return out;
    });
  m.def("mellin_condition_sum", &mellin_condition_sum, py::arg("dist"), py::arg("n"), py::arg("ell_max"),
        py::arg("grid") = MellinGrid::original);

  m.def("validate_config", [](const std::string& config_json) { return validate(config_from_json(config_json)); },
        py::arg("config_json"));
  m.def("render_result",
        [](const std::string& config_json) {
          const ExperimentConfig cfg = config_from_json(config_json);
          py::gil_scoped_release release;
          return render_result(cfg);
        },
        py::arg("config_json"), "Result document (CSV or JSON text) of an experiment config.");
  m.def("run_experiment",
        [](const std::string& config_json) {
          const ExperimentConfig cfg = config_from_json(config_json);
          py::gil_scoped_release release;
          return manifest_to_json(run(cfg));
        },
        py::arg("config_json"), "Runs an experiment, writes its files and returns the manifest JSON.");
}
