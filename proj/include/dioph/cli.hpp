#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dioph/counting.hpp"
#include "dioph/montecarlo.hpp"
#include "dioph/problem.hpp"

namespace dioph {

enum class ExitCode : int { Ok = 0, VerdictFailure = 1, Usage = 2, CapExceeded = 3 };

struct CliConfig {
  std::string subcommand;  // count, lln, clt, covariance, alpha-tail, variance, selftest
  std::optional<std::string> config_path;
  ProblemSpec problem;
  double logT = 12.0;
  std::optional<double> T;  // when given, overrides logT for count
  std::uint64_t samples = 4000;
  std::uint64_t seed = 42;
  int workers = 0;
  std::string out_dir = "dioph_out";
  Convention convention = Convention::BothSigns;
  std::vector<int> lags{0, 1, 2, 3};
  int base_t = 8;
  std::vector<double> L_grid{2, 4, 8};
  double kappa = 4.0;
  std::vector<int> N_grid{6, 7, 8, 9, 10, 11};
  std::vector<double> u;        // count: explicit u, row-major; empty means sample index `index`
  std::uint64_t index = 0;
  std::int64_t theta_p_max = 2000;
  bool fast = false;

  friend bool operator==(const CliConfig&, const CliConfig&) = default;
};

// Thrown for --help; text is the usage message.
struct HelpRequested {
  std::string text;
};

// Config-file values first, then flags. Throws UsageError or HelpRequested.
CliConfig parse_args(int argc, const char* const* argv);

nlohmann::json to_json(const CliConfig& config);
CliConfig cli_config_from_json(const nlohmann::json& j);

// Integer N for the experiments; UsageError otherwise.
int log_T_integer(const CliConfig& config);
ExperimentConfig experiment_config(const CliConfig& config);

// File writers. CSVs start with a "# schema_version=1" comment row.
std::vector<std::filesystem::path> emit_results(const CltResult& result, const CliConfig& config,
                                                const std::filesystem::path& dir);
std::vector<std::filesystem::path> emit_results(const LlnResult& result, const CliConfig& config,
                                                const std::filesystem::path& dir);
std::vector<std::filesystem::path> emit_results(const CovarianceResult& result, const CliConfig& config,
                                                const std::filesystem::path& dir);
std::vector<std::filesystem::path> emit_results(const AlphaTailResult& result, const CliConfig& config,
                                                const std::filesystem::path& dir);

// Full entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dioph
