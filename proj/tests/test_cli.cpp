#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dioph/cli.hpp"
#include "dioph/errors.hpp"
#include "dioph/selftest.hpp"

using namespace dioph;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "dioph_lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

CliConfig parse(std::vector<std::string> args) {
  args.insert(args.begin(), "dioph_lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return parse_args(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("dioph_test_" + name);
  fs::remove_all(dir);
  return dir;
}

const std::vector<std::string> kProblem{"--m", "2", "--n", "1", "--thetas", "1,1", "--weights", "1/2,1/2"};

std::vector<std::string> with_problem(std::vector<std::string> head, std::vector<std::string> tail = {}) {
  head.insert(head.end(), kProblem.begin(), kProblem.end());
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

}  // namespace

TEST_CASE("the documented clt invocation parses") {
  const auto c = parse(with_problem({"clt"}, {"--logT", "12", "--samples", "4000", "--seed", "42"}));
  CHECK(c.subcommand == "clt");
  CHECK(c.problem.m == 2);
  CHECK(c.problem.weights == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  CHECK(c.problem.thetas == std::vector<double>{1.0, 1.0});
  CHECK(c.samples == 4000);
  CHECK(c.seed == 42);
  CHECK(log_T_integer(c) == 12);
  const auto e = experiment_config(c);
  CHECK(e.N == 12);
  CHECK(e.problem.dimension() == 3);
}

TEST_CASE("usage errors") {
  CHECK_THROWS_AS(parse({"clt", "--m", "2", "--thetas", "1,1", "--weights", "1/2,1/2"}), UsageError);
  CHECK_THROWS_AS(parse(with_problem({"clt"}, {"--bogus", "1"})), UsageError);
  CHECK_THROWS_AS(parse({}), UsageError);
  CHECK_THROWS_AS(parse(with_problem({"clt"}, {"--norm", "taxicab"})), UsageError);
  CHECK_THROWS_AS(parse(with_problem({"count"}, {"--lags", "1"})), UsageError);
  const auto missing = run({"clt", "--m", "2", "--thetas", "1,1", "--weights", "1/2,1/2"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("--n") != std::string::npos);
  CHECK(run({"clt", "--help"}).code == 0);
}

TEST_CASE("weight-sum violations surface from validation") {
  const auto r = run({"count", "--m", "2", "--n", "1", "--thetas", "1,1", "--weights", "1,1", "--T", "10"});
  CHECK(r.code == 2);
  CHECK(r.err.find("weight sum") != std::string::npos);
}

TEST_CASE("non-integer log T is rejected for experiments") {
  const auto c = parse(with_problem({"lln"}, {"--logT", "2.5"}));
  CHECK_THROWS_AS(log_T_integer(c), UsageError);
}

TEST_CASE("config JSON round trip") {
  auto c = parse(with_problem({"covariance"}, {"--lags", "0,2", "--seed", "7", "--norm", "euclidean"}));
  CHECK(cli_config_from_json(to_json(c)) == c);
  c.T = 55.5;
  c.u = {0.25, 0.5};
  CHECK(cli_config_from_json(to_json(c)) == c);
  CliConfig d;
  CHECK(cli_config_from_json(to_json(d)) == d);
}

TEST_CASE("flags override the config file") {
  const auto dir = scratch("config");
  fs::create_directories(dir);
  const auto path = dir / "run.json";
  std::ofstream(path) << R"({"m": 2, "n": 1, "weights": ["1/3", "2/3"], "thetas": [1, 2], "samples": 10, "seed": 5})";
  const auto c = parse({"lln", "--config", path.string(), "--seed", "9"});
  CHECK(c.problem.weights[0] == Rational(1, 3));
  CHECK(c.problem.thetas[1] == 2.0);
  CHECK(c.samples == 10);
  CHECK(c.seed == 9);
  CHECK_THROWS_AS(parse({"lln", "--config", (dir / "missing.json").string()}), UsageError);
}

TEST_CASE("count and variance emit JSON") {
  const auto r = run(with_problem({"count"}, {"--T", "50", "--u", "0.5,0.25"}));
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["T"] == 50.0);
  CHECK(j["convention"] == "both");
  std::uint64_t sum = 0;
  for (const auto& b : j["per_block"]) sum += b.get<std::uint64_t>();
  CHECK(sum == j["total"].get<std::uint64_t>());

  const auto v = run(with_problem({"variance"}, {"--p-max", "300"}));
  REQUIRE(v.code == 0);
  const auto jv = nlohmann::json::parse(v.out);
  CHECK(jv["C"] == 8.0);
  CHECK(jv["sigma2"].get<double>() == doctest::Approx(27.78984888));
  CHECK(jv["theta_table"].size() == 2 * 8 + 1);
}

TEST_CASE("cap exceeded exits with code 3") {
  setenv("DIOPH_CAP", "100", 1);
  const auto r = run(with_problem({"count"}, {"--T", "1000"}));
  unsetenv("DIOPH_CAP");
  CHECK(r.code == 3);
}

TEST_CASE("clt run writes csv, summary and plot script deterministically") {
  const auto dir = scratch("clt");
  const auto args = with_problem({"clt"}, {"--logT", "5", "--samples", "30", "--out-dir", dir.string()});
  const auto first = run(args);
  CHECK((first.code == 0 || first.code == 1));
  const auto csv = slurp(dir / "results.csv");
  CHECK(csv.rfind("# schema_version=1\nindex,Delta,D_T\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 32);
  const auto plot = slurp(dir / "plot.gp");
  CHECK(plot.find("'results.csv'") != std::string::npos);
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(summary["result"]["stats"]["sample_count"] == 30);
  CHECK(summary["config"]["seed"] == 42);
  run(args);
  CHECK(slurp(dir / "results.csv") == csv);
}

TEST_CASE("empty results give a header-only CSV and a no-data summary") {
  const auto dir = scratch("empty");
  CltResult empty;
  const auto paths = emit_results(empty, CliConfig{}, dir);
  CHECK(paths.size() == 3);
  CHECK(slurp(dir / "results.csv") == "# schema_version=1\nindex,Delta,D_T\n");
  CHECK(nlohmann::json::parse(slurp(dir / "summary.json"))["result"]["no_data"] == true);
}

TEST_CASE("output directory errors carry the path") {
  const auto dir = scratch("blocked");
  fs::create_directories(dir.parent_path());
  std::ofstream(dir) << "a file, not a directory";
  try {
    emit_results(LlnResult{}, CliConfig{}, dir / "sub");
    FAIL("expected an I/O error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("dioph_test_blocked") != std::string::npos);
  }
  fs::remove(dir);
}

TEST_CASE("other experiments write their tables") {
  const auto dir = scratch("lln");
  const auto r = run(with_problem({"lln"}, {"--samples", "20", "--N-grid", "2,3", "--out-dir", dir.string()}));
  CHECK((r.code == 0 || r.code == 1));
  CHECK(slurp(dir / "lln.csv").rfind("# schema_version=1\nN,", 0) == 0);
  const auto dir2 = scratch("tail");
  const auto t = run(with_problem({"alpha-tail"}, {"--samples", "50", "--L-grid", "2", "--out-dir", dir2.string()}));
  CHECK(t.code == 0);
  CHECK(slurp(dir2 / "alpha_tail.csv").find("2,3,") != std::string::npos);
}

TEST_CASE("selftest fast mode passes and skips statistical suites") {
  SelftestOptions opt;
  opt.fast = true;
  const auto report = run_selftest(opt);
  std::ostringstream out;
  report.print(out);
  INFO(out.str());
  CHECK(report.passed());
  for (const auto& c : report.checks) CHECK(c.suite != "statistical");
}

TEST_CASE("a corrupted zeta is caught by the sigma2 identity check") {
  SelftestOptions opt;
  opt.fast = true;
  opt.zeta = [](double s) { return s == 2.0 ? theory::zeta(s) * 1.01 : theory::zeta(s); };
  const auto report = run_selftest(opt);
  CHECK_FALSE(report.passed());
  bool named = false;
  for (const auto& c : report.checks) {
    if (c.name == "sigma2_identity_2x1") {
      named = true;
      CHECK_FALSE(c.passed);
    }
  }
  CHECK(named);
}
