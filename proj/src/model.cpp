#include "frm/model.hpp"

#include <cmath>
#include <sstream>

#include "frm/error.hpp"

namespace frm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

int round_to_int(double x) { return static_cast<int>(std::lround(x)); }

void flip_to_positive_lead(Eigen::Ref<Vector> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      if (v(i) < 0.0) v = -v;
      return;
    }
  }
}

}  // namespace

Dimensions Dimensions::from_ratios(int n, double inv_alpha, double kappa) {
  if (!(inv_alpha > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "inv_alpha must be positive");
  }
  return from_samples(n, round_to_int(n / inv_alpha), kappa);
}

Dimensions Dimensions::from_samples(int n, int m, double kappa) {
  if (!(kappa > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "kappa must be positive");
  }
  Dimensions d{n, m, round_to_int(kappa * m)};
  d.validate();
  return d;
}

void Dimensions::validate() const {
  std::ostringstream os;
  os << "n=" << n << " m=" << m << " k=" << k;
  if (n < 1 || m < 1 || k < 1) {
    throw Error(ErrorKind::InvalidParameter, "dimensions must be >= 1 (" + os.str() + ")");
  }
  if (k >= m) {
    throw Error(ErrorKind::InvalidParameter, "need k < m (" + os.str() + ")");
  }
  if (k >= n) {
    throw Error(ErrorKind::InvalidParameter, "need alpha * kappa = k/n < 1 (" + os.str() + ")");
  }
}

Dimensions ModelConfig::dimensions() const {
  if (m.has_value()) return Dimensions::from_samples(n, *m, kappa);
  if (inv_alpha.has_value()) return Dimensions::from_ratios(n, *inv_alpha, kappa);
  throw Error(ErrorKind::ConfigError, "one of inv_alpha or m is required");
}

ModelConfig ModelConfig::with_inv_alpha(double value) const {
  ModelConfig out = *this;
  out.inv_alpha = value;
  out.m.reset();
  return out;
}

Covariance Covariance::scaled_identity(Eigen::Index dim, double scale) {
  if (!(scale >= 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "covariance scale must be non-negative");
  }
  Covariance c;
  c.dim_ = dim;
  c.identity_ = true;
  c.scale_ = scale;
  return c;
}

Covariance Covariance::dense(DenseMatrix matrix) {
  Covariance c;
  c.dim_ = matrix.rows();
  c.identity_ = false;
  c.root_ = psd_root(matrix).factor;
  c.matrix_ = symmetrize(matrix);
  return c;
}

DenseMatrix Covariance::matrix() const {
  if (identity_) return scale_ * DenseMatrix::Identity(dim_, dim_);
  return matrix_;
}

DenseMatrix Covariance::root() const {
  if (identity_) return std::sqrt(scale_) * DenseMatrix::Identity(dim_, dim_);
  return root_;
}

double Covariance::trace() const {
  return identity_ ? scale_ * static_cast<double>(dim_) : matrix_.trace();
}

double Covariance::quadratic_form(const Vector& x) const {
  return identity_ ? scale_ * x.squaredNorm() : x.dot(matrix_ * x);
}

Vector Covariance::apply(const Vector& x) const {
  return identity_ ? Vector(scale_ * x) : Vector(matrix_ * x);
}

DenseMatrix Covariance::color_rows(const DenseMatrix& rows) const {
  if (identity_) return std::sqrt(scale_) * rows;
  return rows * root_.triangularView<Eigen::Lower>().transpose();
}

Vector Covariance::color_vector(const Vector& v) const {
  if (identity_) return std::sqrt(scale_) * v;
  return root_.triangularView<Eigen::Lower>() * v;
}

DenseMatrix build_toeplitz_mix(double q, Eigen::Index size, double scale) {
  if (!(q >= 0.0 && q < 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "Toeplitz mix requires 0 <= q < 1");
  }
  if (size < 1 || !(scale > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "Toeplitz mix requires size >= 1 and scale > 0");
  }
  DenseMatrix out(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = 0; j < size; ++j) {
      const auto lag = static_cast<double>(i > j ? i - j : j - i);
      out(i, j) = scale * 0.5 * ((i == j ? 1.0 : 0.0) + std::pow(q, lag));
    }
  }
  return out;
}

DenseMatrix build_loadings(const LoadingsSpec& spec, const Dimensions& dims) {
  const Eigen::Index k = dims.k;
  const Eigen::Index n = dims.n;
  if (k > n) {
    throw Error(ErrorKind::DimensionMismatch, "loadings need k <= n");
  }
  return std::visit(
      overloaded{
          [&](const ScaledUnitary& s) -> DenseMatrix {
            if (!(s.c_l > 0.0)) {
              throw Error(ErrorKind::InvalidParameter, "c_l must be positive");
            }
            const double c_L = s.c_l * static_cast<double>(n) / static_cast<double>(k);
            DenseMatrix L = DenseMatrix::Zero(k, n);
            L.leftCols(k).diagonal().setConstant(std::sqrt(c_L));
            return L;
          },
          [&](const LeadingEigenvectors& s) -> DenseMatrix {
            const SpectralFactorization eig = sym_eig(build_toeplitz_mix(s.q_L, n, 1.0));
            DenseMatrix L(k, n);
            for (Eigen::Index r = 0; r < k; ++r) {
              Vector row = eig.basis.col(n - 1 - r);
              flip_to_positive_lead(row);
              L.row(r) = row.transpose();
            }
            return L;
          },
          [&](const DenseLoadings& s) -> DenseMatrix {
            if (s.matrix.rows() != k || s.matrix.cols() != n) {
              std::ostringstream os;
              os << "dense loadings are " << s.matrix.rows() << "x" << s.matrix.cols()
                 << ", expected " << k << "x" << n;
              throw Error(ErrorKind::DimensionMismatch, os.str());
            }
            return s.matrix;
          },
      },
      spec);
}

Covariance materialize_covariance(const CovarianceSpec& spec, Eigen::Index dim, double factor) {
  return std::visit(
      overloaded{
          [&](const IdentityScaled& s) {
            if (!(s.scale > 0.0)) {
              throw Error(ErrorKind::InvalidParameter, "identity covariance scale must be positive");
            }
            return Covariance::scaled_identity(dim, factor * s.scale);
          },
          [&](const ToeplitzMix& s) {
            if (s.q == 0.0) {
              if (!(s.scale > 0.0)) {
                throw Error(ErrorKind::InvalidParameter, "Toeplitz mix requires scale > 0");
              }
              return Covariance::scaled_identity(dim, factor * s.scale);
            }
            return Covariance::dense(build_toeplitz_mix(s.q, dim, factor * s.scale));
          },
          [&](const DenseCovariance& s) {
            if (s.matrix.rows() != dim || s.matrix.cols() != dim) {
              std::ostringstream os;
              os << "dense covariance is " << s.matrix.rows() << "x" << s.matrix.cols()
                 << ", expected " << dim << "x" << dim;
              throw Error(ErrorKind::DimensionMismatch, os.str());
            }
            if (factor == 0.0) return Covariance::scaled_identity(dim, 0.0);
            return Covariance::dense(factor * s.matrix);
          },
      },
      spec);
}

ModelInstance materialize(const ModelConfig& config) {
  if (!(config.sigma_sq >= 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "sigma_sq must be non-negative");
  }
  ModelInstance inst;
  inst.dims = config.dimensions();
  const auto& d = inst.dims;

  Vector beta = config.beta_bar.value_or(Vector::Constant(d.k, 1.0 / std::sqrt(double(d.k))));
  if (beta.size() != d.k) {
    std::ostringstream os;
    os << "beta_bar has length " << beta.size() << ", expected k=" << d.k;
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
  if (std::abs(beta.norm() - 1.0) > 1e-10) {
    throw Error(ErrorKind::InvalidParameter, "beta_bar must have unit norm");
  }

  inst.sigma_sq = config.sigma_sq;
  inst.beta_bar = std::move(beta);
  inst.loadings = build_loadings(config.loadings, d);
  inst.factor_cov = materialize_covariance(config.factor_cov, d.k);
  inst.feature_noise_cov = materialize_covariance(config.feature_noise_cov, d.n);
  inst.response_noise_cov = materialize_covariance(config.response_noise_cov, d.m, config.sigma_sq);
  inst.entry_distribution = config.entry_distribution;
  inst.sigma_bar_sq = inst.response_noise_cov.trace() / static_cast<double>(d.m);
  return inst;
}

double null_risk(const ModelInstance& instance) {
  return instance.factor_cov.quadratic_form(instance.beta_bar);
}

double factor_snr(const ModelInstance& instance) {
  const double noise = instance.feature_noise_cov.trace();
  if (!(noise > 0.0)) {
    throw Error(ErrorKind::DivisionByZero, "tr(Sigma_E) is zero");
  }
  const DenseMatrix& L = instance.loadings;
  // tr(L^T Sigma_Z L) = tr(Sigma_Z L L^T)
  const double signal = (instance.factor_cov.matrix() * (L * L.transpose())).trace();
  return signal / noise;
}

}  // namespace frm
