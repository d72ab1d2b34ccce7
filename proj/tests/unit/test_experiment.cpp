#include "benfrag/errors.hpp"
#include "benfrag/experiment.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace benfrag;

namespace {

std::string slurp(const std::filesystem::path& p)
{
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::filesystem::path scratch_dir()
{
  auto dir = std::filesystem::temp_directory_path() / "benfrag_unit_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

bool mentions(const std::vector<std::string>& v, const std::string& needle)
{
  return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

} // namespace

TEST_CASE("config JSON round trip")
{
  ExperimentConfig c;
  c.command = Command::wafer;
  c.m = 4;
  c.d = 2;
  c.seed = 18446744073709551615ull;
  c.delta = 0.1 + 0.2;
  c.n_values = { 25, 100 };
  c.axis_distributions = { { "beta", 0, 0, 2.5, 0.75 }, { "loguniform", -0.3, -0.1, 1, 1 } };
  c.allow_heterogeneous = true;
  c.initial_log_sides = { 0.1, -1e-300, 3.0, 1.0 / 3.0 };
  c.s_values = { 1.5 };
  c.output_format = "json";
  CHECK(config_from_json(config_to_json(c)) == c);
  CHECK(config_from_json(config_to_json(ExperimentConfig{})) == ExperimentConfig{});
  CHECK(config_from_json("{}") == ExperimentConfig{});
}

TEST_CASE("config parsing rejects unknown keys and bad values")
{
  CHECK_THROWS_AS(config_from_json(R"({"trails": 10})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"distribution": {"family": "beta", "gamma": 2}})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"m": "three"})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"command": "plot"})"), ConfigError);
  CHECK_THROWS_AS(config_from_json("{"), ConfigError);
}

TEST_CASE("validation reports every violation")
{
  ExperimentConfig c;
  c.m = 2;
  c.d = 3;
  c.trials = 0;
  c.delta = 1.0;
  c.epsilon = 0.2;
  const auto v = validate(c);
  CHECK(std::find(v.begin(), v.end(), "d exceeds m") != v.end());
  CHECK(mentions(v, "trials"));
  CHECK(mentions(v, "delta"));
  CHECK(mentions(v, "epsilon"));
  CHECK(v.size() >= 4);

  ExperimentConfig tree;
  tree.command = Command::branching;
  tree.m = 3;
  tree.n = 10;
  CHECK(mentions(validate(tree), "2^30 leaves exceed in-memory cap"));
  tree.streaming = true;
  CHECK(validate(tree).empty());

  ExperimentConfig mixed;
  mixed.axis_distributions = { { "uniform" }, { "beta", 0, 0, 2, 2 } };
  CHECK(mentions(validate(mixed), "allow_heterogeneous"));
  mixed.allow_heterogeneous = true;
  CHECK(validate(mixed).empty());

  ExperimentConfig bad_law;
  bad_law.distribution = { "loguniform", 0.0, 0.5 };
  CHECK(mentions(validate(bad_law), "distribution"));
}

TEST_CASE("run writes results and a manifest")
{
  const auto dir = scratch_dir();
  ExperimentConfig c;
  c.command = Command::conformance;
  c.m = 2;
  c.d = 2;
  c.n = 50;
  c.trials = 2000;
  c.seed = 42;
  c.dump_significands = true;
  c.output_path = (dir / "conf.csv").string();

  const RunManifest m = run(c);
  REQUIRE(m.results.size() == 2);
  const std::string csv = slurp(c.output_path);
  CHECK(csv.rfind("statistic,value,sample_size,base\nks_distance,", 0) == 0);
  CHECK(m.results[0].sha256 == sha256_hex(csv));
  CHECK(slurp(c.output_path + ".significands.csv").rfind("significand\n", 0) == 0);
  CHECK(std::filesystem::exists(c.output_path + ".manifest.json"));

  const std::string first = csv;
  c.workers = 4;
  run(c);
  CHECK(slurp(c.output_path) == first);

  c.trials = 0;
  CHECK_THROWS_AS(run(c), ConfigError);
}

TEST_CASE("every command renders in both formats")
{
  for (Command cmd : { Command::simulate,
                       Command::conformance,
                       Command::wafer,
                       Command::charfn,
                       Command::mellin,
                       Command::maxside,
                       Command::branching }) {
    ExperimentConfig c;
    c.command = cmd;
    c.m = cmd == Command::branching ? 1 : 3;
    c.n = cmd == Command::branching ? 8 : 30;
    c.trials = 200;
    c.seed = 5;
    c.distribution = { "loguniform", -1.0, 0.0 };
    CAPTURE(to_string(cmd));
    const std::string csv = render_result(c);
    CHECK(std::count(csv.begin(), csv.end(), '\n') >= 2);
    c.output_format = "json";
    const std::string js = render_result(c);
    CHECK(js.find("\"rows\"") != std::string::npos);
  }
}

TEST_CASE("byte-identical results for any worker count")
{
  for (Command cmd : { Command::simulate, Command::wafer, Command::branching }) {
    ExperimentConfig c;
    c.command = cmd;
    c.m = cmd == Command::branching ? 2 : 3;
    c.n = cmd == Command::branching ? 5 : 60;
    c.trials = 700;
    c.seed = 99;
    c.n_values = { 20, 60 };
    const std::string one = render_result(c);
    for (std::size_t w : { 4, 16 }) {
      c.workers = w;
      CHECK(render_result(c) == one);
    }
  }
}

TEST_CASE("SHA-256")
{
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
