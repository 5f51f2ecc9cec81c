#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dioph/counting.hpp"
#include "dioph/problem.hpp"
#include "dioph/stats.hpp"
#include "dioph/theory.hpp"

namespace dioph {

// Statistical tolerances. No convergence rates are known, so these are harness
// defaults and can be changed per run.
struct Thresholds {
  double lln_gap = 1.0;
  double lln_band = 1.0;
  double clt_ks = 0.07;
  double clt_variance_rel = 0.25;
  double clt_cumulant = 0.5;
  double z = 4.0;
  double tail_factor = 4.0;
  double tail_power = 2.0;
};

struct ExperimentConfig {
  explicit ExperimentConfig(ApproximationProblem p) : problem(std::move(p)) {}

  ApproximationProblem problem;
  int N = 12;                            // T = e^N
  std::vector<int> N_grid{6, 7, 8, 9, 10, 11};
  std::uint64_t samples = 4000;
  std::uint64_t seed = 42;
  int workers = 0;
  Convention convention = Convention::BothSigns;
  std::vector<int> lags{0, 1, 2, 3};
  int base_t = 8;
  std::vector<double> L_grid{2, 4, 8};
  double kappa = 4.0;
  std::vector<int> trend_N{4, 8};        // extra CLT normalisations from the same samples
  std::vector<int> block_steps{4, 6, 8}; // Siegel mean check
  std::int64_t theta_p_max = 2000;
  std::optional<MatrixU> fixed_u;        // every sample uses this u
  std::uint64_t cap = enumeration_cap();
  Thresholds thresholds;

  void check() const;  // PreconditionError on S < 1 and similar
  MatrixU u_for(std::uint64_t index) const;
};

// ---- LLN ------------------------------------------------------------------

struct LlnRow {
  int N = 0;
  double mean = 0.0;
  double stderr_mean = 0.0;
  double CN = 0.0;
  double gap = 0.0;             // |mean - C N|
  double expected = 0.0;        // exact torus average of Delta_{e^N}
  double gap_expected = 0.0;    // |mean - expected|
};

struct LlnResult {
  std::vector<LlnRow> rows;
  std::vector<std::vector<std::uint64_t>> deltas;  // deltas[row][sample]
  double C = 0.0;
  // nullopt means inconclusive (S = 1 with random u)
  std::optional<bool> gaps_within;  // every gap <= thresholds.lln_gap
  std::optional<bool> flat;         // max gap - min gap <= thresholds.lln_band
};

LlnResult run_lln(const ExperimentConfig& config);

// ---- CLT ------------------------------------------------------------------

struct TrendPoint {
  int N = 0;
  double variance = 0.0;
  double ks_distance = 0.0;
  double std_cum3 = 0.0;  // |cum3| / Var^{3/2}
  double std_cum4 = 0.0;  // |cum4| / Var^2
};

struct FactorTwoDiagnostic {
  double empirical_variance = 0.0;
  double sigma_forms = 0.0;        // normalised variance constant for both-sign counts
  double sigma_vectors_x4 = 0.0;   // 4 x the constant stated for the positive-q count
  double ratio_forms = 0.0;
  double ratio_vectors_x4 = 0.0;
  std::string closer;              // which constant the data sits nearer
};

struct CltResult {
  std::vector<std::uint64_t> deltas;
  std::vector<double> D;
  SummaryStats stats;
  std::optional<theory::TheoryConstants> theory;  // for m = 1 values are informational
  bool theory_available = false;                 // m >= 2
  bool degenerate = false;                        // zero empirical variance
  std::vector<TrendPoint> trend;                  // trend_N then N
  std::optional<FactorTwoDiagnostic> factor_two;  // n = 1 only
  nlohmann::json verdicts = nlohmann::json::object();
  bool passed = false;
};

CltResult run_clt(const ExperimentConfig& config);

// "no data", "degenerate", "theory comparison unavailable" or "evaluated".
std::string clt_status(const SummaryStats& stats, bool theory_available);

// ---- covariance -----------------------------------------------------------

struct CovarianceRow {
  int s = 0;
  double empirical = 0.0;
  double stderr_cov = 0.0;
  double theory = 0.0;
  bool within = false;
};

struct CovarianceResult {
  std::vector<CovarianceRow> rows;
  double var_D = 0.0;
  double var_D_stderr = 0.0;
  double var_D_prediction = 0.0;  // (1/N) sum_{|s|<N} (N - |s|) Theta(s)
  bool var_D_within = false;
  bool passed = false;
};

CovarianceResult run_covariance(const ExperimentConfig& config);

// (1/N) sum_{|s|<N} (N - |s|) Theta_inf(s)
double variance_chain_prediction(const ApproximationProblem& problem, int N, std::int64_t p_max);

// ---- alpha tail -----------------------------------------------------------

struct TailRow {
  double L = 1.0;
  int s = 0;
  std::uint64_t hits = 0;
  double tail = 0.0;
  Interval wilson;
  double bound = 0.0;
  bool within = false;
};

struct AlphaTailResult {
  std::vector<TailRow> rows;
  bool certified = true;
  bool passed = false;
};

AlphaTailResult run_alpha_tail(const ExperimentConfig& config);

// ---- Siegel mean ----------------------------------------------------------

struct SiegelMeanRow {
  int s = 0;
  double mean = 0.0;
  double stderr_mean = 0.0;
  double integral = 0.0;
  bool within = false;
};

struct SiegelMeanResult {
  std::vector<SiegelMeanRow> rows;
  bool passed = false;
};

// Mean over u of chi^(a^s Lambda_u) for chi the indicator of 1 <= ||y|| < e.
SiegelMeanResult run_siegel_mean(const ExperimentConfig& config);

nlohmann::json to_json(const LlnResult& r);
nlohmann::json to_json(const CltResult& r);
nlohmann::json to_json(const CovarianceResult& r);
nlohmann::json to_json(const AlphaTailResult& r);
nlohmann::json to_json(const SiegelMeanResult& r);

}  // namespace dioph
