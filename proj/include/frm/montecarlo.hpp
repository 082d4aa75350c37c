#pragma once

// Deterministic Monte Carlo for the factor regression model: draw (X, y),
// fit the estimators, measure what the theory predicts.
//
// Trial t draws from RngStream(master_seed, t) in a fixed order: Z (m x k,
// row by row), then E (m x n, row by row), then v (m). The parallel runners
// reduce per-trial results in trial order, so aggregates are bit-identical
// for any thread count and match the serial reference runners.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "frm/model.hpp"

namespace frm {

struct Gls {};
struct Ridge {
  double lambda = 1.0;
};
struct Ls {};
using EstimatorKind = std::variant<Gls, Ridge, Ls>;

std::string estimator_name(const EstimatorKind& kind);

struct SampledData {
  DenseMatrix X;  // m x n
  Vector y;       // m
};

struct TrialResult {
  double norm_sq = 0.0;
  double objective = 0.0;
  double residual_sq = 0.0;  // ||y - X b||^2 / m
  double excess_risk = 0.0;
};

struct FieldStats {
  double mean = 0.0;
  double stdev = 0.0;
  double std_error = 0.0;
};

struct Aggregate {
  int count = 0;
  FieldStats norm_sq;
  FieldStats objective;
  FieldStats residual_sq;
  FieldStats excess_risk;
  std::vector<TrialResult> trials;
};

/// X = Z A^T-root L + E Ebar-root, y = Z A^T-root beta_bar + e-root v.
SampledData sample_data(const ModelInstance& instance, RngStream stream);

/// Throws RegimeError (Gls needs m < n, Ls needs m > n, Ridge needs
/// lambda > 0) and IllConditioned.
Vector fit(const EstimatorKind& kind, const DenseMatrix& X, const Vector& y);

TrialResult evaluate(const ModelInstance& instance, const EstimatorKind& kind,
                     const SampledData& data);

/// Two-pass mean and sample standard deviation; a single trial has stdev 0.
Aggregate aggregate(std::vector<TrialResult> trials);

/// One aggregate per kind; every kind sees the same draws in a given trial.
std::vector<Aggregate> run_trials(const ModelInstance& instance,
                                  const std::vector<EstimatorKind>& kinds, int trials,
                                  std::uint64_t master_seed);
Aggregate run_trials(const ModelInstance& instance, const EstimatorKind& kind, int trials,
                     std::uint64_t master_seed);

/// Single-threaded reference for run_trials.
std::vector<Aggregate> run_trials_serial(const ModelInstance& instance,
                                         const std::vector<EstimatorKind>& kinds, int trials,
                                         std::uint64_t master_seed);

}  // namespace frm
