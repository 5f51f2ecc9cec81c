#include "dioph/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dioph/errors.hpp"
#include "dioph/lattice.hpp"
#include "dioph/parallel.hpp"
#include "dioph/rng.hpp"

namespace dioph {

void ExperimentConfig::check() const {
  if (samples < 1) throw PreconditionError("samples must be >= 1");
  if (N < 1) throw PreconditionError("N must be >= 1");
  for (int v : N_grid)
    if (v < 1) throw PreconditionError("N grid entries must be >= 1");
  if (fixed_u && (fixed_u->m() != problem.m() || fixed_u->n() != problem.n())) {
    throw PreconditionError("fixed u has the wrong shape");
  }
}

MatrixU ExperimentConfig::u_for(std::uint64_t index) const {
  if (fixed_u) return *fixed_u;
  return sample_u(seed, index, problem.m(), problem.n());
}

namespace {

// Mean constant for the chosen sign convention.
double mean_constant(const ApproximationProblem& problem, Convention convention) {
  const double C = domain_volume(problem, std::exp(1.0));
  return convention == Convention::PositiveQ ? C / 2.0 : C;
}

// Per-sample block counts for blocks 0..N-1, all samples.
std::vector<std::vector<std::uint64_t>> sample_blocks(const ExperimentConfig& config, int N) {
  const CountingPlan plan(config.problem, std::exp(static_cast<double>(N)), config.convention, config.cap);
  return parallel_map<std::vector<std::uint64_t>>(config.samples, config.workers, [&](std::uint64_t i) {
    auto blocks = plan.count(config.u_for(i)).per_block;
    blocks.resize(N, 0);
    return blocks;
  });
}

std::uint64_t prefix(const std::vector<std::uint64_t>& blocks, int N) {
  std::uint64_t acc = 0;
  for (int s = 0; s < N; ++s) acc += blocks[s];
  return acc;
}

// Exact torus average of each block: sum over q of prod_i 2 theta_i ||q||^{-w_i}.
std::vector<double> expected_blocks(const ExperimentConfig& config, int N) {
  const auto& problem = config.problem;
  std::vector<double> out(N, 0.0);
  RadialWindow window{1.0, std::exp(static_cast<double>(N)), true, false};
  std::vector<double> radii(problem.m());
  for_each_q(problem, window, config.convention, config.cap, [&](std::span<const std::int64_t>, double r) {
    fill_radii(problem, r, radii);
    double prod = 1.0;
    for (double rho : radii) prod *= 2.0 * rho;
    const int s = block_index(r);
    if (s < N) out[s] += prod;
  });
  return out;
}

std::vector<double> as_double(const std::vector<std::uint64_t>& v) { return {v.begin(), v.end()}; }

TrendPoint trend_point(int N, std::span<const double> D, double sigma2) {
  TrendPoint t;
  t.N = N;
  const auto s = summarize(D, sigma2 > 0 ? std::function<double(double)>([=](double x) { return normal_cdf(x, sigma2); })
                                         : std::function<double(double)>{});
  t.variance = s.variance;
  t.ks_distance = s.ks_distance;
  if (s.variance > 0) {
    t.std_cum3 = std::abs(s.cum3) / std::pow(s.variance, 1.5);
    t.std_cum4 = std::abs(s.cum4) / (s.variance * s.variance);
  }
  return t;
}

}  // namespace

LlnResult run_lln(const ExperimentConfig& config) {
  config.check();
  if (config.N_grid.empty()) throw PreconditionError("LLN needs a nonempty N grid");
  const int n_max = *std::max_element(config.N_grid.begin(), config.N_grid.end());
  const auto blocks = sample_blocks(config, n_max);
  const auto expected = expected_blocks(config, n_max);

  LlnResult out;
  out.C = mean_constant(config.problem, config.convention);
  for (int N : config.N_grid) {
    std::vector<std::uint64_t> deltas(config.samples);
    for (std::uint64_t i = 0; i < config.samples; ++i) deltas[i] = prefix(blocks[i], N);
    const auto d = as_double(deltas);
    const auto s = summarize(d);
    LlnRow row;
    row.N = N;
    row.mean = s.mean;
    row.stderr_mean = s.stderr_mean;
    row.CN = out.C * N;
    row.gap = std::abs(s.mean - row.CN);
    for (int b = 0; b < N; ++b) row.expected += expected[b];
    row.gap_expected = std::abs(s.mean - row.expected);
    out.rows.push_back(row);
    out.deltas.push_back(std::move(deltas));
  }
  if (config.samples >= 2 || config.fixed_u) {
    double lo = out.rows.front().gap, hi = lo;
    for (const auto& r : out.rows) {
      lo = std::min(lo, r.gap);
      hi = std::max(hi, r.gap);
    }
    out.gaps_within = hi <= config.thresholds.lln_gap;
    if (config.samples >= 2) out.flat = (hi - lo) <= config.thresholds.lln_band;
  }
  return out;
}

std::string clt_status(const SummaryStats& stats, bool theory_available) {
  if (stats.sample_count == 0) return "no data";
  if (stats.variance == 0.0) return "degenerate";
  if (!theory_available) return "theory comparison unavailable";
  return "evaluated";
}

CltResult run_clt(const ExperimentConfig& config) {
  config.check();
  const auto& problem = config.problem;
  CltResult out;
  if (problem.dimension() >= 3) out.theory = theory::constants(problem);
  out.theory_available = out.theory && problem.m() >= 2;
  const double sign_scale = config.convention == Convention::PositiveQ ? 0.25 : 1.0;
  const double sigma2 = out.theory ? out.theory->sigma2 * sign_scale : 0.0;
  const double C = mean_constant(problem, config.convention);

  const auto blocks = sample_blocks(config, config.N);
  auto normalised = [&](int N) {
    std::vector<double> D(config.samples);
    for (std::uint64_t i = 0; i < config.samples; ++i) {
      D[i] = normalize_clt(static_cast<double>(prefix(blocks[i], N)), std::exp(static_cast<double>(N)), C, sigma2);
    }
    return D;
  };

  out.deltas.resize(config.samples);
  for (std::uint64_t i = 0; i < config.samples; ++i) out.deltas[i] = prefix(blocks[i], config.N);
  out.D = normalised(config.N);
  std::function<double(double)> cdf;
  if (sigma2 > 0) cdf = [=](double x) { return normal_cdf(x, sigma2); };
  out.stats = summarize(out.D, cdf);
  out.degenerate = out.stats.variance == 0.0;

  for (int N : config.trend_N) {
    if (N >= 1 && N < config.N) out.trend.push_back(trend_point(N, normalised(N), sigma2));
  }
  out.trend.push_back(trend_point(config.N, out.D, sigma2));

  if (problem.n() == 1 && out.theory) {
    FactorTwoDiagnostic f;
    f.empirical_variance = out.stats.variance / sign_scale;  // both-sign scale
    f.sigma_forms = out.theory->sigma2;
    f.sigma_vectors_x4 = 2.0 * out.theory->sigma2;
    f.ratio_forms = f.empirical_variance / f.sigma_forms;
    f.ratio_vectors_x4 = f.empirical_variance / f.sigma_vectors_x4;
    f.closer = std::abs(std::log(f.ratio_forms)) <= std::abs(std::log(f.ratio_vectors_x4)) ? "sigma_forms"
                                                                                             : "sigma_vectors_x4";
    if (!std::isfinite(f.ratio_forms) || f.empirical_variance == 0.0) f.closer = "undetermined";
    out.factor_two = f;
  }

  const std::string status = clt_status(out.stats, out.theory_available);
  out.verdicts["status"] = status;
  if (status == "evaluated") {
    const auto& th = config.thresholds;
    const auto& last = out.trend.back();
    const bool var_ok = std::abs(out.stats.variance - sigma2) <= th.clt_variance_rel * sigma2;
    const bool ks_ok = out.stats.ks_distance <= th.clt_ks;
    const bool c3_ok = last.std_cum3 <= th.clt_cumulant;
    const bool c4_ok = last.std_cum4 <= th.clt_cumulant;
    out.verdicts["variance_within"] = var_ok;
    out.verdicts["ks_within"] = ks_ok;
    out.verdicts["cum3_within"] = c3_ok;
    out.verdicts["cum4_within"] = c4_ok;
    bool decreasing = true;
    const TrendPoint* ref = nullptr;
    for (const auto& t : out.trend)
      if (t.N < config.N && (!ref || t.N > ref->N)) ref = &t;
    if (ref) {
      decreasing = last.std_cum3 <= ref->std_cum3 && last.std_cum4 <= ref->std_cum4;
      out.verdicts["cumulants_decreasing_from_N"] = ref->N;
      out.verdicts["ks_decreasing"] = last.ks_distance < out.trend.front().ks_distance;
    }
    out.verdicts["cumulants_decreasing"] = decreasing;
    out.passed = var_ok && ks_ok && c3_ok && c4_ok && decreasing;
  }
  return out;
}

double variance_chain_prediction(const ApproximationProblem& problem, int N, std::int64_t p_max) {
  const auto table = theory::theta_table(problem, N - 1, p_max);
  double acc = 0.0;
  for (int s = -(N - 1); s <= N - 1; ++s) acc += (N - std::abs(s)) * table[s + N - 1];
  return acc / N;
}

CovarianceResult run_covariance(const ExperimentConfig& config) {
  config.check();
  if (config.convention != Convention::BothSigns) throw PreconditionError("covariance uses both-sign counts");
  if (config.problem.dimension() < 3) throw PreconditionError("covariance theory needs m + n >= 3");
  int top = config.N;
  int s_max = config.N;
  for (int s : config.lags) {
    if (config.base_t + s < 0) throw PreconditionError("t + s must be >= 0");
    top = std::max(top, config.base_t + s + 1);
    s_max = std::max(s_max, std::abs(s));
  }
  const auto blocks = sample_blocks(config, top);
  const auto table = theory::theta_table(config.problem, s_max, config.theta_p_max);
  const auto& th = config.thresholds;

  CovarianceResult out;
  auto block_column = [&](int b) {
    std::vector<double> col(config.samples);
    for (std::uint64_t i = 0; i < config.samples; ++i) col[i] = static_cast<double>(blocks[i][b]);
    return col;
  };
  const auto base = block_column(config.base_t);
  bool all = true;
  for (int s : config.lags) {
    CovarianceRow row;
    row.s = s;
    const auto shifted = block_column(config.base_t + s);
    if (config.samples >= 2) {
      row.empirical = covariance(shifted, base);
      row.stderr_cov = covariance_stderr(shifted, base);
    }
    row.theory = table[s + s_max];
    row.within = config.samples >= 2 && std::abs(row.empirical - row.theory) <= th.z * row.stderr_cov;
    all = all && row.within;
    out.rows.push_back(row);
  }

  const double C = mean_constant(config.problem, config.convention);
  std::vector<double> D(config.samples);
  for (std::uint64_t i = 0; i < config.samples; ++i) {
    D[i] = normalize_clt(static_cast<double>(prefix(blocks[i], config.N)), std::exp(double(config.N)), C, 0.0);
  }
  const auto st = summarize(D);
  out.var_D = st.variance;
  if (config.samples >= 2) {
    // Var of the sample variance ~ (mu4 - var^2) / S
    double mu4 = 0.0;
    for (double x : D) mu4 += std::pow(x - st.mean, 4);
    mu4 /= static_cast<double>(config.samples);
    out.var_D_stderr = std::sqrt(std::max(0.0, mu4 - st.variance * st.variance) / static_cast<double>(config.samples));
  }
  double acc = 0.0;
  for (int s = -(config.N - 1); s <= config.N - 1; ++s) acc += (config.N - std::abs(s)) * table[s + s_max];
  out.var_D_prediction = acc / config.N;
  out.var_D_within = config.samples >= 2 && std::abs(out.var_D - out.var_D_prediction) <= th.z * out.var_D_stderr;
  out.passed = all && out.var_D_within && config.problem.m() >= 2;
  return out;
}

AlphaTailResult run_alpha_tail(const ExperimentConfig& config) {
  config.check();
  if (config.problem.dimension() > 5) throw PreconditionError("alpha tail needs m + n <= 5 for certified alpha");
  AlphaTailResult out;
  std::vector<int> steps;
  for (double L : config.L_grid) {
    if (!(L >= 1.0)) throw PreconditionError("L must be >= 1");
    TailRow row;
    row.L = L;
    row.s = static_cast<int>(std::ceil(config.kappa * std::log(L) - 1e-12));
    row.bound = config.thresholds.tail_factor * std::pow(L, -config.thresholds.tail_power);
    out.rows.push_back(row);
    steps.push_back(row.s);
  }
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());

  struct Sample {
    std::vector<double> alpha;
    bool certified = true;
  };
  const auto per_sample = parallel_map<Sample>(config.samples, config.workers, [&](std::uint64_t i) {
    Sample smp;
    const auto lattice = lattice_from_u(config.problem, config.u_for(i));
    for (int s : steps) {
      const auto res = alpha(apply_flow(lattice, s));
      smp.alpha.push_back(res.value);
      smp.certified = smp.certified && res.certified;
    }
    return smp;
  });

  out.passed = true;
  for (auto& row : out.rows) {
    const auto k = static_cast<std::size_t>(std::lower_bound(steps.begin(), steps.end(), row.s) - steps.begin());
    for (const auto& smp : per_sample) row.hits += smp.alpha[k] >= row.L ? 1 : 0;
    row.tail = static_cast<double>(row.hits) / static_cast<double>(config.samples);
    row.wilson = wilson_interval(row.hits, config.samples);
    row.within = row.tail <= row.bound;
    out.passed = out.passed && row.within;
  }
  for (const auto& smp : per_sample) out.certified = out.certified && smp.certified;
  out.passed = out.passed && out.certified;
  return out;
}

SiegelMeanResult run_siegel_mean(const ExperimentConfig& config) {
  config.check();
  const auto f = WeightedBoxFunction::omega_e(config.problem);
  const auto values = parallel_map<std::vector<double>>(config.samples, config.workers, [&](std::uint64_t i) {
    const auto lattice = lattice_from_u(config.problem, config.u_for(i));
    std::vector<double> v;
    for (int s : config.block_steps) {
      v.push_back(static_cast<double>(siegel_transform_box(config.problem, f, lattice, s, config.cap)));
    }
    return v;
  });
  SiegelMeanResult out;
  out.passed = true;
  const double integral = box_integral(config.problem, f);
  for (std::size_t k = 0; k < config.block_steps.size(); ++k) {
    std::vector<double> col(config.samples);
    for (std::uint64_t i = 0; i < config.samples; ++i) col[i] = values[i][k];
    const auto st = summarize(col);
    SiegelMeanRow row{config.block_steps[k], st.mean, st.stderr_mean, integral, false};
    row.within = config.samples >= 2 && std::abs(st.mean - integral) <= config.thresholds.z * st.stderr_mean;
    out.passed = out.passed && row.within;
    out.rows.push_back(row);
  }
  return out;
}

// ---- JSON -----------------------------------------------------------------

namespace {

nlohmann::json optional_bool(const std::optional<bool>& b) {
  return b ? nlohmann::json(*b) : nlohmann::json("inconclusive");
}

}  // namespace

nlohmann::json to_json(const LlnResult& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& x : r.rows) {
    rows.push_back({{"N", x.N}, {"mean", x.mean}, {"stderr", x.stderr_mean}, {"CN", x.CN}, {"gap", x.gap},
                    {"expected", x.expected}, {"gap_expected", x.gap_expected}});
  }
  return {{"C", r.C}, {"rows", rows}, {"gaps_within", optional_bool(r.gaps_within)}, {"flat", optional_bool(r.flat)}};
}

nlohmann::json to_json(const CltResult& r) {
  nlohmann::json j{{"stats", to_json(r.stats)}, {"theory_available", r.theory_available},
                   {"degenerate", r.degenerate}, {"verdicts", r.verdicts}, {"passed", r.passed}};
  if (r.stats.sample_count == 0) j["no_data"] = true;
  if (r.theory) {
    j["theory"] = {{"C", r.theory->C}, {"sigma2", r.theory->sigma2}, {"zeta_ratio", r.theory->zeta_ratio}};
  }
  nlohmann::json trend = nlohmann::json::array();
  for (const auto& t : r.trend) {
    trend.push_back({{"N", t.N}, {"variance", t.variance}, {"ks_distance", t.ks_distance},
                     {"std_cum3", t.std_cum3}, {"std_cum4", t.std_cum4}});
  }
  j["trend"] = trend;
  if (r.factor_two) {
    const auto& f = *r.factor_two;
    j["factor_two"] = {{"empirical_variance", f.empirical_variance}, {"sigma_forms", f.sigma_forms},
                       {"sigma_vectors_x4", f.sigma_vectors_x4},     {"ratio_forms", f.ratio_forms},
                       {"ratio_vectors_x4", f.ratio_vectors_x4},     {"closer", f.closer}};
  }
  return j;
}

nlohmann::json to_json(const CovarianceResult& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& x : r.rows) {
    rows.push_back({{"s", x.s}, {"empirical", x.empirical}, {"stderr", x.stderr_cov}, {"theta", x.theory},
                    {"within", x.within}});
  }
  return {{"rows", rows},
          {"var_D", r.var_D},
          {"var_D_stderr", r.var_D_stderr},
          {"var_D_prediction", r.var_D_prediction},
          {"var_D_within", r.var_D_within},
          {"passed", r.passed}};
}

nlohmann::json to_json(const AlphaTailResult& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& x : r.rows) {
    rows.push_back({{"L", x.L}, {"s", x.s}, {"hits", x.hits}, {"tail", x.tail},
                    {"wilson", {x.wilson.low, x.wilson.high}}, {"bound", x.bound}, {"within", x.within}});
  }
  return {{"rows", rows}, {"certified", r.certified}, {"passed", r.passed}};
}

nlohmann::json to_json(const SiegelMeanResult& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& x : r.rows) {
    rows.push_back({{"s", x.s}, {"mean", x.mean}, {"stderr", x.stderr_mean}, {"integral", x.integral},
                    {"within", x.within}});
  }
  return {{"rows", rows}, {"passed", r.passed}};
}

}  // namespace dioph
