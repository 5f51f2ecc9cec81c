#include "dioph/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dioph/errors.hpp"
#include "dioph/rng.hpp"
#include "dioph/selftest.hpp"
#include "dioph/theory.hpp"

namespace dioph {

namespace fs = std::filesystem;

namespace {

const char* const kSubcommands[] = {"count", "lln", "clt", "covariance", "alpha-tail", "variance", "selftest"};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::optional<std::string> scan_config_path(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return std::nullopt;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file " + path + ": " + e.what());
  }
}

void require_problem(const CliConfig& c) {
  if (c.problem.m <= 0) throw UsageError("missing --m");
  if (c.problem.n <= 0) throw UsageError("missing --n");
  if (c.problem.weights.empty()) throw UsageError("missing --weights");
  if (c.problem.thetas.empty()) throw UsageError("missing --thetas");
}

}  // namespace

nlohmann::json to_json(const CliConfig& c) {
  nlohmann::json weights = nlohmann::json::array();
  for (const auto& w : c.problem.weights) weights.push_back(w.str());
  nlohmann::json j{{"subcommand", c.subcommand},
                   {"m", c.problem.m},
                   {"n", c.problem.n},
                   {"weights", weights},
                   {"thetas", c.problem.thetas},
                   {"norm", to_string(c.problem.norm)},
                   {"logT", c.logT},
                   {"samples", c.samples},
                   {"seed", c.seed},
                   {"workers", c.workers},
                   {"out-dir", c.out_dir},
                   {"convention", to_string(c.convention)},
                   {"lags", c.lags},
                   {"base-t", c.base_t},
                   {"L-grid", c.L_grid},
                   {"kappa", c.kappa},
                   {"N-grid", c.N_grid},
                   {"u", c.u},
                   {"index", c.index},
                   {"p-max", c.theta_p_max},
                   {"fast", c.fast}};
  if (c.T) j["T"] = *c.T;
  if (c.config_path) j["config"] = *c.config_path;
  return j;
}

CliConfig cli_config_from_json(const nlohmann::json& j) {
  CliConfig c;
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  try {
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("subcommand", c.subcommand);
    get("m", c.problem.m);
    get("n", c.problem.n);
    if (j.contains("weights")) {
      c.problem.weights.clear();
      for (const auto& w : j.at("weights")) {
        c.problem.weights.push_back(w.is_string() ? Rational::parse(w.get<std::string>())
                                                  : Rational::parse(w.dump()));
      }
    }
    get("thetas", c.problem.thetas);
    if (j.contains("norm")) c.problem.norm = parse_norm(j.at("norm").get<std::string>());
    get("logT", c.logT);
    if (j.contains("T")) c.T = j.at("T").get<double>();
    get("samples", c.samples);
    get("seed", c.seed);
    get("workers", c.workers);
    get("out-dir", c.out_dir);
    if (j.contains("convention")) c.convention = parse_convention(j.at("convention").get<std::string>());
    get("lags", c.lags);
    get("base-t", c.base_t);
    get("L-grid", c.L_grid);
    get("kappa", c.kappa);
    get("N-grid", c.N_grid);
    get("u", c.u);
    get("index", c.index);
    get("p-max", c.theta_p_max);
    get("fast", c.fast);
    if (j.contains("config")) c.config_path = j.at("config").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed config: ") + e.what());
  } catch (const ValidationError& e) {
    throw UsageError(std::string("malformed config: ") + e.what());
  }
  return c;
}

CliConfig parse_args(int argc, const char* const* argv) {
  CliConfig c;
  if (auto path = scan_config_path(argc, argv)) {
    c = cli_config_from_json(read_json_file(*path));
    c.config_path = *path;
  }

  auto describe = [](std::string_view name) -> std::string {
    if (name == "count") return "count solutions for one u, total and per block";
    if (name == "lln") return "mean of Delta over sampled u against C log T";
    if (name == "clt") return "distribution of the normalised discrepancy D_T";
    if (name == "covariance") return "block lag covariances and Var(D) against Theta";
    if (name == "alpha-tail") return "empirical tail of alpha_1 along the flow";
    if (name == "variance") return "theoretical C, sigma^2 and the Theta table";
    return "built-in consistency checks";
  };

  CLI::App app{"Experiments on counting weighted Diophantine approximants", "dioph_lab"};
  app.require_subcommand(1, 1);

  std::vector<std::string> weights;
  std::string norm = to_string(c.problem.norm);
  std::string convention = to_string(c.convention);
  std::optional<double> T;
  std::string config_path;

  for (const char* name : kSubcommands) {
    auto* sub = app.add_subcommand(name, describe(name));
    sub->add_option("--config", config_path, "JSON file mirroring the flags");
    sub->add_option("--workers", c.workers, "OpenMP threads (0 = default)");
    if (std::string(name) == "selftest") {
      sub->add_flag("--fast", c.fast, "skip statistical suites");
      continue;
    }
    sub->add_option("--m", c.problem.m, "number of forms");
    sub->add_option("--n", c.problem.n, "number of variables");
    sub->add_option("--weights", weights, "comma-separated rationals")->delimiter(',');
    sub->add_option("--thetas", c.problem.thetas, "comma-separated reals")->delimiter(',');
    sub->add_option("--norm", norm, "sup or euclidean");
    if (std::string(name) == "variance") {
      sub->add_option("--p-max", c.theta_p_max, "truncation of the (p, q) sums");
      continue;
    }
    sub->add_option("--logT", c.logT, "log T");
    sub->add_option("--T", T, "T");
    sub->add_option("--seed", c.seed, "64-bit seed");
    sub->add_option("--convention", convention, "both or positive");
    sub->add_option("--out-dir", c.out_dir, "output directory");
    if (std::string(name) == "count") {
      sub->add_option("--u", c.u, "row-major entries of u in [0,1)")->delimiter(',');
      sub->add_option("--index", c.index, "sample index used when --u is absent");
      continue;
    }
    sub->add_option("--samples", c.samples, "number of sampled u");
    if (std::string(name) == "lln") sub->add_option("--N-grid", c.N_grid, "values of log T")->delimiter(',');
    if (std::string(name) == "covariance") {
      sub->add_option("--lags", c.lags, "lags s")->delimiter(',');
      sub->add_option("--base-t", c.base_t, "base block t");
      sub->add_option("--p-max", c.theta_p_max, "truncation of the (p, q) sums");
    }
    if (std::string(name) == "alpha-tail") {
      sub->add_option("--L-grid", c.L_grid, "levels L")->delimiter(',');
      sub->add_option("--kappa", c.kappa, "s = ceil(kappa log L)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    auto subs = app.get_subcommands();
    throw HelpRequested{subs.empty() ? app.help() : subs.front()->help()};
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  c.subcommand = app.get_subcommands().front()->get_name();

  try {
    if (!weights.empty()) {
      c.problem.weights.clear();
      for (const auto& w : weights) c.problem.weights.push_back(Rational::parse(w));
    }
    c.problem.norm = parse_norm(norm);
    c.convention = parse_convention(convention);
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
  if (T) {
    if (!(*T > 0)) throw UsageError("--T must be positive");
    c.T = T;
    c.logT = std::log(*T);
  }
  if (c.subcommand != "selftest") require_problem(c);
  return c;
}

int log_T_integer(const CliConfig& c) {
  const double N = std::round(c.logT);
  if (std::abs(c.logT - N) > 1e-9 || N < 1) throw UsageError("experiments need an integer --logT >= 1");
  return static_cast<int>(N);
}

ExperimentConfig experiment_config(const CliConfig& c) {
  ExperimentConfig e(validate(c.problem));
  e.N = log_T_integer(c);
  e.N_grid = c.N_grid;
  e.samples = c.samples;
  e.seed = c.seed;
  e.workers = c.workers;
  e.convention = c.convention;
  e.lags = c.lags;
  e.base_t = c.base_t;
  e.L_grid = c.L_grid;
  e.kappa = c.kappa;
  e.theta_p_max = c.theta_p_max;
  return e;
}

// ---- output ---------------------------------------------------------------

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
}

fs::path write_summary(const fs::path& dir, const CliConfig& config, const nlohmann::json& result) {
  const auto path = dir / "summary.json";
  auto out = open_out(path);
  out << nlohmann::json{{"config", to_json(config)}, {"result", result}}.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path.string());
  return path;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

std::vector<fs::path> emit_results(const CltResult& result, const CliConfig& config, const fs::path& dir) {
  prepare_dir(dir);
  const auto csv = dir / "results.csv";
  {
    auto out = open_out(csv);
    out << "# schema_version=1\nindex,Delta,D_T\n";
    for (std::size_t i = 0; i < result.D.size(); ++i) {
      out << i << "," << result.deltas[i] << "," << fmt(result.D[i]) << "\n";
    }
    finish(out, csv);
  }
  const auto plot = dir / "plot.gp";
  {
    auto out = open_out(plot);
    const double sigma2 = result.theory ? result.theory->sigma2 : 1.0;
    out << "# gnuplot script: histogram of D_T with the normal density of variance sigma2\n"
        << "set datafile separator ','\n"
        << "set key autotitle columnhead\n"
        << "sigma2 = " << fmt(sigma2) << "\n"
        << "S = " << result.D.size() << "\n"
        << "w = 0.25\n"
        << "bin(x) = w * floor(x / w) + w / 2\n"
        << "set style fill solid 0.4\n"
        << "plot 'results.csv' using (bin($3)):(1.0 / (S * w)) smooth freq with boxes title 'D_T', \\\n"
        << "     exp(-x**2 / (2 * sigma2)) / sqrt(2 * pi * sigma2) with lines lw 2 title 'Norm'\n";
    finish(out, plot);
  }
  return {csv, write_summary(dir, config, to_json(result)), plot};
}

std::vector<fs::path> emit_results(const LlnResult& result, const CliConfig& config, const fs::path& dir) {
  prepare_dir(dir);
  const auto csv = dir / "lln.csv";
  auto out = open_out(csv);
  out << "# schema_version=1\nN,mean,stderr,CN,gap,expected,gap_expected\n";
  for (const auto& r : result.rows) {
    out << r.N << "," << fmt(r.mean) << "," << fmt(r.stderr_mean) << "," << fmt(r.CN) << "," << fmt(r.gap) << ","
        << fmt(r.expected) << "," << fmt(r.gap_expected) << "\n";
  }
  finish(out, csv);
  return {csv, write_summary(dir, config, to_json(result))};
}

std::vector<fs::path> emit_results(const CovarianceResult& result, const CliConfig& config, const fs::path& dir) {
  prepare_dir(dir);
  const auto csv = dir / "covariance.csv";
  auto out = open_out(csv);
  out << "# schema_version=1\ns,empirical,stderr,theta\n";
  for (const auto& r : result.rows) {
    out << r.s << "," << fmt(r.empirical) << "," << fmt(r.stderr_cov) << "," << fmt(r.theory) << "\n";
  }
  finish(out, csv);
  return {csv, write_summary(dir, config, to_json(result))};
}

std::vector<fs::path> emit_results(const AlphaTailResult& result, const CliConfig& config, const fs::path& dir) {
  prepare_dir(dir);
  const auto csv = dir / "alpha_tail.csv";
  auto out = open_out(csv);
  out << "# schema_version=1\nL,s,hits,tail,wilson_low,wilson_high,bound\n";
  for (const auto& r : result.rows) {
    out << fmt(r.L) << "," << r.s << "," << r.hits << "," << fmt(r.tail) << "," << fmt(r.wilson.low) << ","
        << fmt(r.wilson.high) << "," << fmt(r.bound) << "\n";
  }
  finish(out, csv);
  return {csv, write_summary(dir, config, to_json(result))};
}

// ---- dispatch -------------------------------------------------------------

namespace {

int print_paths(std::ostream& out, const std::vector<fs::path>& paths, bool ok) {
  for (const auto& p : paths) out << "wrote " << p.string() << "\n";
  out << (ok ? "verdict: pass" : "verdict: FAIL") << "\n";
  return static_cast<int>(ok ? ExitCode::Ok : ExitCode::VerdictFailure);
}

int dispatch(const CliConfig& c, std::ostream& out, std::ostream& err) {
  if (c.subcommand == "selftest") {
    SelftestOptions opt;
    opt.fast = c.fast;
    opt.workers = c.workers;
    const auto report = run_selftest(opt);
    report.print(out);
    return static_cast<int>(report.passed() ? ExitCode::Ok : ExitCode::VerdictFailure);
  }
  const auto problem = validate(c.problem);
  if (c.subcommand == "count") {
    const MatrixU u = c.u.empty() ? sample_u(c.seed, c.index, problem.m(), problem.n())
                                  : MatrixU(problem.m(), problem.n(), c.u);
    const double T = c.T ? *c.T : std::exp(c.logT);
    const auto res = count_direct(problem, u, T, c.convention);
    out << nlohmann::json{{"T", res.T}, {"total", res.total}, {"per_block", res.per_block},
                          {"convention", to_string(res.convention)}}
               .dump()
        << "\n";
    return 0;
  }
  if (c.subcommand == "variance") {
    const auto k = theory::constants(problem);
    const int s_max = static_cast<int>(std::ceil(std::log(static_cast<double>(c.theta_p_max)))) + 2;
    const auto table = theory::theta_table(problem, s_max, c.theta_p_max);
    nlohmann::json rows = nlohmann::json::array();
    for (int s = -s_max; s <= s_max; ++s) rows.push_back({s, table[s + s_max]});
    out << nlohmann::json{{"C", k.C}, {"sigma2", k.sigma2}, {"zeta_ratio", k.zeta_ratio}, {"theta_table", rows}}
               .dump(2)
        << "\n";
    return 0;
  }

  const auto e = experiment_config(c);
  const fs::path dir(c.out_dir);
  err << "running " << c.subcommand << ": S=" << e.samples << " seed=" << e.seed << "\n";
  if (c.subcommand == "lln") {
    const auto r = run_lln(e);
    return print_paths(out, emit_results(r, c, dir), r.gaps_within.value_or(true));
  }
  if (c.subcommand == "clt") {
    const auto r = run_clt(e);
    const std::string status = r.verdicts.value("status", "");
    if (status != "evaluated") out << "status: " << status << "\n";
    return print_paths(out, emit_results(r, c, dir), status != "evaluated" || r.passed);
  }
  if (c.subcommand == "covariance") {
    const auto r = run_covariance(e);
    return print_paths(out, emit_results(r, c, dir), problem.m() < 2 || r.passed);
  }
  if (c.subcommand == "alpha-tail") {
    const auto r = run_alpha_tail(e);
    return print_paths(out, emit_results(r, c, dir), r.passed);
  }
  throw UsageError("unknown subcommand " + c.subcommand);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(parse_args(argc, argv), out, err);
  } catch (const HelpRequested& h) {
    out << h.text;
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Usage);
  } catch (const ValidationError& e) {
    err << "invalid problem: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Usage);
  } catch (const PreconditionError& e) {
    err << "precondition: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Usage);
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << "\n";
    return static_cast<int>(ExitCode::CapExceeded);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::VerdictFailure);
  }
}

}  // namespace dioph
