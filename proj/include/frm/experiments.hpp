#pragma once

// Experiment orchestration behind the frm-risk CLI: single-point theory and
// simulation reports, over-parametrization sweeps, lambda tuning curves and
// the two-ratio reference table.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "frm/error.hpp"
#include "frm/model.hpp"
#include "frm/montecarlo.hpp"
#include "frm/theory.hpp"

namespace frm {

struct ExperimentReport {
  nlohmann::json config;  // echo, sufficient to re-run
  Dimensions dims;
  std::uint64_t seed = 0;
  int trials = 0;
  double null_risk = 0.0;
  std::optional<GlsPrediction> gls;
  std::optional<LsPrediction> ls;
  double lambda_star = 0.0;
  RidgePrediction ridge;
  std::optional<Aggregate> gls_mc;
  std::optional<Aggregate> ls_mc;
  std::optional<Aggregate> ridge_mc;
  double wall_seconds = 0.0;
};

/// Theory for every estimator defined at the configured point. Throws
/// InterpolationSingularity when m == n.
ExperimentReport cmd_theory(const ModelConfig& config, LambdaRange range = {});

/// Theory plus Monte Carlo; ridge is simulated at the theory-optimal lambda.
ExperimentReport cmd_simulate(const ModelConfig& config, int trials, std::uint64_t seed,
                              LambdaRange range = {});

/// Long format: estimator,quantity,theory,mc_mean,mc_stderr,rel_gap.
std::string report_to_csv(const ExperimentReport& report);
nlohmann::json report_to_json(const ExperimentReport& report);

struct SweepRow {
  double inv_alpha = 0.0;
  int m = 0;
  int k = 0;
  std::optional<double> null_risk;
  std::optional<double> gls_theory;
  std::optional<double> gls_mc;
  std::optional<double> gls_mc_stderr;
  std::optional<double> ls_theory;
  std::optional<double> ls_mc;
  std::optional<double> ls_mc_stderr;
  std::optional<double> lambda_star;
  std::optional<double> ridge_theory;
  std::optional<double> ridge_mc;
  std::optional<double> ridge_mc_stderr;
  std::string error;

  bool operator==(const SweepRow&) const = default;
};

/// Grid points with |alpha - 1| below this have GLS/LS theory marked singular.
inline constexpr double kSingularBand = 1e-3;

std::vector<double> default_sweep_grid();

/// One row per grid value, in grid order. Per-row failures land in `error`.
/// trials == 0 skips the Monte Carlo columns.
std::vector<SweepRow> cmd_sweep(const ModelConfig& config, const std::vector<double>& grid,
                                int trials, std::uint64_t seed, LambdaRange range = {});

std::string sweep_to_csv(const std::vector<SweepRow>& rows);
/// Inverse of sweep_to_csv. Throws ConfigError on malformed input.
std::vector<SweepRow> parse_sweep_csv(const std::string& text);
nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows);

struct TunePoint {
  double lambda = 0.0;
  std::optional<RidgePrediction> prediction;  // empty where the risk diverges
};

struct TuneResult {
  double lambda_star = 0.0;
  RidgePrediction optimum;
  std::optional<double> gls_risk;
  /// risk(lambda*) within 1% of the GLS risk.
  bool smoothing_marginal = false;
  std::vector<TunePoint> curve;
};

TuneResult cmd_tune(const ModelConfig& config, LambdaRange range, int points = 200);
std::string tune_to_csv(const TuneResult& result);
nlohmann::json tune_to_json(const TuneResult& result);

/// Uncorrelated scaled-unitary reference point: n = 600, kappa = 1/2,
/// sigma^2 = 0.2, c_l = 4.
ModelConfig table1_config(double inv_alpha);

struct Table1Result {
  ExperimentReport under;  // inv_alpha = 0.7
  ExperimentReport over;   // inv_alpha = 3
};

Table1Result cmd_table1(std::uint64_t seed, int trials);
std::string table1_text(const Table1Result& table);
/// Columns: inv_alpha,estimator,quantity,theory,simulated,simulated_stderr.
std::string table1_csv(const Table1Result& table);

/// %.9g formatting used by every CSV writer.
std::string format_number(double v);

/// Writes via a temporary file and rename. Throws IoError.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// 2 config error, 3 mathematical regime error, 4 I/O error.
int exit_code_for(ErrorKind kind);

}  // namespace frm
