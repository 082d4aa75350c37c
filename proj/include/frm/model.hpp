#pragma once

// Correlated factor regression model:
//   y = Z A beta_bar + e,   X = Z A L + E Ebar,
// with Sigma_Z = A^T A (k x k), Sigma_E (n x n) and Sigma_e (m x m).

#include <cstdint>
#include <optional>
#include <variant>

#include "frm/numerics.hpp"

namespace frm {

struct Dimensions {
  int n = 0;  // features
  int m = 0;  // samples
  int k = 0;  // factors

  double alpha() const { return static_cast<double>(m) / n; }
  double kappa() const { return static_cast<double>(k) / m; }
  double inv_alpha() const { return static_cast<double>(n) / m; }

  /// m = round(n / inv_alpha), k = round(kappa * m).
  static Dimensions from_ratios(int n, double inv_alpha, double kappa);
  static Dimensions from_samples(int n, int m, double kappa);

  /// n, m, k >= 1, k < m, k < n. Throws InvalidParameter.
  void validate() const;
};

struct IdentityScaled {
  double scale = 1.0;
};
/// scale * (I + Abar(q)) / 2 with Abar_ij = q^|i-j|.
struct ToeplitzMix {
  double q = 0.0;
  double scale = 1.0;
};
struct DenseCovariance {
  DenseMatrix matrix;
};
using CovarianceSpec = std::variant<IdentityScaled, ToeplitzMix, DenseCovariance>;

/// L L^T = c_L I with c_L = c_l * n / k, so c_l is the factor SNR.
struct ScaledUnitary {
  double c_l = 1.0;
};
/// Rows are the k leading eigenvectors of cA(q_L).
struct LeadingEigenvectors {
  double q_L = 0.0;
};
struct DenseLoadings {
  DenseMatrix matrix;  // k x n
};
using LoadingsSpec = std::variant<ScaledUnitary, LeadingEigenvectors, DenseLoadings>;

enum class EntryDistribution { Gaussian, Rademacher, ScaledUniform };

struct ModelConfig {
  int n = 600;
  /// Exactly one of inv_alpha / m determines the sample count.
  std::optional<double> inv_alpha = 3.0;
  std::optional<int> m;
  double kappa = 0.5;
  double sigma_sq = 0.2;
  CovarianceSpec factor_cov = IdentityScaled{};
  CovarianceSpec feature_noise_cov = IdentityScaled{};
  /// Sigma_e / sigma^2.
  CovarianceSpec response_noise_cov = IdentityScaled{};
  LoadingsSpec loadings = ScaledUnitary{4.0};
  /// Empty means ones(k) / sqrt(k).
  std::optional<Vector> beta_bar;
  EntryDistribution entry_distribution = EntryDistribution::Gaussian;
  std::uint64_t seed = 20240101;

  Dimensions dimensions() const;
  /// Same generating rules at a different over-parametrization ratio.
  ModelConfig with_inv_alpha(double inv_alpha) const;
};

/// A materialized covariance together with its sampling root. Scaled
/// identities are kept implicit so no dim x dim storage is allocated.
class Covariance {
 public:
  static Covariance scaled_identity(Eigen::Index dim, double scale);
  /// Throws NotPsd.
  static Covariance dense(DenseMatrix matrix);

  Eigen::Index dim() const { return dim_; }
  bool is_scaled_identity() const { return identity_; }
  double identity_scale() const { return scale_; }

  DenseMatrix matrix() const;
  /// Lower-triangular root R with R R^T = matrix().
  DenseMatrix root() const;
  double trace() const;
  double quadratic_form(const Vector& x) const;
  Vector apply(const Vector& x) const;
  /// rows * R^T, i.e. rows drawn with identity covariance mapped to this one.
  DenseMatrix color_rows(const DenseMatrix& rows) const;
  /// R * v.
  Vector color_vector(const Vector& v) const;

 private:
  Eigen::Index dim_ = 0;
  bool identity_ = true;
  double scale_ = 1.0;
  DenseMatrix matrix_;
  DenseMatrix root_;
};

struct ModelInstance {
  Dimensions dims;
  double sigma_sq = 0.0;
  Covariance factor_cov;         // Sigma_Z, k x k
  Covariance feature_noise_cov;  // Sigma_E, n x n
  Covariance response_noise_cov; // Sigma_e, m x m, sigma^2 included
  DenseMatrix loadings;          // L, k x n
  Vector beta_bar;               // k
  EntryDistribution entry_distribution = EntryDistribution::Gaussian;
  double sigma_bar_sq = 0.0;     // tr(Sigma_e) / m
};

/// Entry (i, j) = scale * (delta_ij + q^|i-j|) / 2. Throws InvalidParameter.
DenseMatrix build_toeplitz_mix(double q, Eigen::Index size, double scale);

/// k x n loadings. Throws DimensionMismatch.
DenseMatrix build_loadings(const LoadingsSpec& spec, const Dimensions& dims);

Covariance materialize_covariance(const CovarianceSpec& spec, Eigen::Index dim, double factor = 1.0);

/// Validates and builds every matrix of the model. Throws NotPsd,
/// DimensionMismatch, InvalidParameter.
ModelInstance materialize(const ModelConfig& config);

/// beta_bar^T Sigma_Z beta_bar, the excess risk of the zero estimator.
double null_risk(const ModelInstance& instance);

/// tr(L^T Sigma_Z L) / tr(Sigma_E). Throws DivisionByZero.
double factor_snr(const ModelInstance& instance);

}  // namespace frm
