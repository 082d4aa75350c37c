#pragma once

// Closed-form excess-risk predictors for the GLS interpolator, ridge and
// least squares in the factor regression model. Every predictor works on the
// spectrum of M = L^T Sigma_Z L + Sigma_E and the projected signal
// cbar = U^T L^T Sigma_Z beta_bar, evaluated at the configured finite
// dimensions.

#include <utility>

#include "frm/model.hpp"

namespace frm {

struct SpectralModel {
  Vector eigvals;        // d, ascending
  Vector cbar;           // U^T L^T Sigma_Z beta_bar
  double signal_energy;  // beta_bar^T Sigma_Z beta_bar

  Eigen::Index dim() const { return eigvals.size(); }
};

struct GlsPrediction {
  double gamma_hat = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double sigma_bar_sq = 0.0;
  double risk = 0.0;       // expected excess risk
  double objective = 0.0;  // ||beta_gls||^2
  double nu1_hat = 0.0;

  double norm_sq() const { return objective; }
  /// The interpolator has zero training residual.
  double residual_sq() const { return 0.0; }
};

struct RidgePrediction {
  double lambda = 0.0;
  double gamma_hat = 0.0;
  double a1r = 0.0;
  double a2r = 0.0;
  double sigma_bar_sq = 0.0;
  double risk = 0.0;
  double objective = 0.0;    // lambda ||b||^2 + ||y - X b||^2 / m
  double nu1_hat = 0.0;
  double residual_sq = 0.0;  // ||y - X b||^2 / m
  double norm_sq = 0.0;      // ||b||^2
};

struct LsPrediction {
  double gamma_hat = 0.0;
  double a1r = 0.0;          // spectral route
  double a1r_compact = 0.0;  // k x k matrix route
  double sigma_bar_sq = 0.0;
  double risk = 0.0;
  double objective = 0.0;
  double norm_sq = 0.0;
  double residual_sq = 0.0;
  double nu1_hat = 0.0;
};

struct LrmEquivalent {
  Vector beta_ddot;  // Sigma_X^{-1} L^T Sigma_Z beta_bar
  double sigma_ddot_sq = 0.0;
  double offset = 0.0;  // beta_bar^T (L Sigma_E^{-1} L^T + Sigma_Z^{-1})^{-1} beta_bar
  DenseMatrix sigma_x;  // L^T Sigma_Z L + Sigma_E
};

/// a1 / a2 evaluated with dense resolvents instead of the spectrum.
struct CompactTerms {
  double a1 = 0.0;
  double a2 = 0.0;
};

/// 1 - alpha * a2 below this is reported as InterpolationSingularity.
inline constexpr double kSingularityThreshold = 1e-8;

struct LambdaRange {
  double lo = 1e-6;
  double hi = 1e3;
};

/// Throws NotPsd when M has a non-positive eigenvalue.
SpectralModel build_spectral(const ModelInstance& instance);

/// Unique gamma > 0 with (1/n) sum 1/(1 + gamma d_i) = 1 - alpha.
/// Throws RegimeError unless 0 < alpha < 1.
double solve_gamma_gls(const SpectralModel& spec, double alpha);

GlsPrediction gls_predict(const SpectralModel& spec, double alpha, double sigma_bar_sq);

/// Root of lambda (1/n) sum 1/(lambda + gamma d_i) = 1 - alpha (1 - gamma).
/// lambda = 0 is accepted for alpha > 1 and returns 1 - 1/alpha.
double solve_gamma_ridge(const SpectralModel& spec, double alpha, double lambda);

RidgePrediction ridge_predict(const SpectralModel& spec, double alpha, double lambda,
                              double sigma_bar_sq);

/// Needs alpha > 1. Computes a1r through both the spectrum and the compact
/// k x k form beta^T (Sigma_Z^{-1} + L Sigma_E^{-1} L^T)^{-1} beta.
LsPrediction ls_predict(const ModelInstance& instance, const SpectralModel& spec, double alpha,
                        double sigma_bar_sq);

/// Dense-matrix GLS a1 / a2 at a given gamma.
CompactTerms gls_compact_terms(const ModelInstance& instance, double gamma, double alpha);
/// Dense-matrix ridge a1r / a2r at a given gamma and lambda.
CompactTerms ridge_compact_terms(const ModelInstance& instance, double gamma, double alpha,
                                 double lambda);

/// Positive root of the two-level fixed point
///   ak / (1 + g (c_L + 1)) + (1 - ak) / (1 + g) = 1 - alpha,  ak = alpha * kappa.
double gamma_gls_closed_uncorr(double alpha, double kappa, double c_L);

/// Limit z of gamma / (alpha kappa) as alpha -> 0 with c_L = c_l / (alpha kappa).
double overparam_limit_z(double kappa, double c_l);

/// GLS risk as alpha -> 0 in the uncorrelated scaled-unitary family.
double gls_limit_overparam(double kappa, double c_l, double sigma_bar_sq);

/// Golden-section search over log(lambda) on [lo, hi] (lo == hi allowed).
std::pair<double, RidgePrediction> optimal_lambda(const SpectralModel& spec, double alpha,
                                                  double sigma_bar_sq, LambdaRange range = {});

/// Requires white response noise. Throws NotPsd, RegimeError.
LrmEquivalent frm_to_lrm(const ModelInstance& instance);

/// (beta_bar - L b)^T Sigma_Z (beta_bar - L b) + b^T Sigma_E b.
double frm_excess_risk(const ModelInstance& instance, const Vector& beta_hat);

/// (beta_ddot - b)^T Sigma_X (beta_ddot - b).
double lrm_excess_risk(const LrmEquivalent& lrm, const Vector& beta_hat);

}  // namespace frm
