#include "frm/theory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "frm/error.hpp"

namespace frm {

namespace {

std::string fmt(const char* label, double v) {
  std::ostringstream os;
  os.precision(12);
  os << label << "=" << v;
  return os.str();
}

DenseMatrix feature_covariance(const ModelInstance& inst) {
  const DenseMatrix& L = inst.loadings;
  DenseMatrix m = L.transpose() * (inst.factor_cov.matrix() * L);
  if (inst.feature_noise_cov.is_scaled_identity()) {
    m.diagonal().array() += inst.feature_noise_cov.identity_scale();
  } else {
    m += inst.feature_noise_cov.matrix();
  }
  return symmetrize(m);
}

Vector projected_signal(const ModelInstance& inst) {
  return inst.loadings.transpose() * inst.factor_cov.apply(inst.beta_bar);
}

Eigen::LLT<DenseMatrix> checked_llt(const DenseMatrix& m, const char* what) {
  Eigen::LLT<DenseMatrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::NotPsd, std::string(what) + " is not positive definite");
  }
  return llt;
}

// beta^T (Sigma_Z^{-1} + L Sigma_E^{-1} L^T)^{-1} beta
double woodbury_offset(const ModelInstance& inst) {
  const auto k = inst.dims.k;
  const DenseMatrix& L = inst.loadings;
  const DenseMatrix zinv = checked_llt(inst.factor_cov.matrix(), "Sigma_Z").solve(DenseMatrix::Identity(k, k));
  DenseMatrix e_inv_lt;
  if (inst.feature_noise_cov.is_scaled_identity()) {
    const double s = inst.feature_noise_cov.identity_scale();
    if (!(s > 0.0)) throw Error(ErrorKind::NotPsd, "Sigma_E is singular");
    e_inv_lt = L.transpose() / s;
  } else {
    e_inv_lt = checked_llt(inst.feature_noise_cov.matrix(), "Sigma_E").solve(DenseMatrix(L.transpose()));
  }
  const DenseMatrix inner = symmetrize(zinv + L * e_inv_lt);
  const Vector& b = inst.beta_bar;
  return b.dot(checked_llt(inner, "Sigma_Z^{-1} + L Sigma_E^{-1} L^T").solve(b));
}

void check_alpha_positive(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::RegimeError, fmt("alpha must be positive, alpha", alpha));
  }
}

double singularity_guard(double alpha, double a2, const char* who) {
  const double denom = 1.0 - alpha * a2;
  if (denom < kSingularityThreshold) {
    std::ostringstream os;
    os << who << ": 1 - alpha*a2 = " << denom << " (alpha=" << alpha << ", a2=" << a2 << ")";
    throw Error(ErrorKind::InterpolationSingularity, os.str());
  }
  return denom;
}

}  // namespace

SpectralModel build_spectral(const ModelInstance& instance) {
  const SpectralFactorization eig = sym_eig(feature_covariance(instance));
  if (!(eig.eigenvalues(0) > 0.0)) {
    throw Error(ErrorKind::NotPsd, fmt("L^T Sigma_Z L + Sigma_E has eigenvalue", eig.eigenvalues(0)));
  }
  SpectralModel spec;
  spec.eigvals = eig.eigenvalues;
  spec.cbar = eig.basis.transpose() * projected_signal(instance);
  spec.signal_energy = null_risk(instance);
  return spec;
}

double solve_gamma_gls(const SpectralModel& spec, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::RegimeError, fmt("GLS needs 0 < alpha < 1, alpha", alpha));
  }
  const auto trace = [&](double g) { return resolvent_trace(spec.eigvals, 1.0, g, 1); };
  return bisect(trace, 1.0 - alpha, 0.0, 1.0);
}

GlsPrediction gls_predict(const SpectralModel& spec, double alpha, double sigma_bar_sq) {
  const double g = solve_gamma_gls(spec, alpha);
  const auto n = spec.dim();
  double s1 = 0.0;
  double s2 = 0.0;
  double v2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = spec.eigvals(i);
    const double c2 = spec.cbar(i) * spec.cbar(i);
    const double t = 1.0 + g * d;
    s1 += c2 / t;
    s2 += c2 / (t * t);
    v2 += d * d / (t * t);
  }
  GlsPrediction p;
  p.gamma_hat = g;
  p.sigma_bar_sq = sigma_bar_sq;
  p.a1 = spec.signal_energy - g * s1 - g * s2;
  p.a2 = g * g / (alpha * alpha) * v2 / static_cast<double>(n);
  const double denom = singularity_guard(alpha, p.a2, "GLS");
  p.risk = (p.a1 + alpha * sigma_bar_sq * p.a2) / denom;
  p.objective = -g * g * s1 + g * spec.signal_energy + g * sigma_bar_sq;
  p.nu1_hat = 2.0 * g * std::sqrt(p.risk + sigma_bar_sq) / std::sqrt(alpha);
  return p;
}

double solve_gamma_ridge(const SpectralModel& spec, double alpha, double lambda) {
  check_alpha_positive(alpha);
  if (lambda < 0.0 || !std::isfinite(lambda)) {
    throw Error(ErrorKind::InvalidParameter, fmt("lambda must be finite and >= 0, lambda", lambda));
  }
  if (lambda == 0.0) {
    if (!(alpha > 1.0)) {
      throw Error(ErrorKind::RegimeError, fmt("lambda = 0 needs alpha > 1, alpha", alpha));
    }
    return 1.0 - 1.0 / alpha;
  }
  // F(0) = alpha > 0 and F(1) < 0, so the root lies in (0, 1).
  const auto F = [&](double g) {
    return lambda * resolvent_trace(spec.eigvals, lambda, g, 1) + alpha * (1.0 - g) - 1.0;
  };
  return bisect(F, 0.0, 0.0, 1.0);
}

RidgePrediction ridge_predict(const SpectralModel& spec, double alpha, double lambda,
                              double sigma_bar_sq) {
  const double g = solve_gamma_ridge(spec, alpha, lambda);
  const auto n = spec.dim();
  double bias = 0.0;   // sum [2 g c^2 / t - g^2 d c^2 / t^2]
  double obj = 0.0;    // sum g^2 c^2 / t
  double v2 = 0.0;     // sum d^2 / t^2
  double nv = 0.0;     // sum d / t^2
  double nb = 0.0;     // sum g^2 c^2 / t^2
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = spec.eigvals(i);
    const double c2 = spec.cbar(i) * spec.cbar(i);
    const double t = lambda + g * d;
    const double t2 = t * t;
    bias += 2.0 * g * c2 / t - g * g * d * c2 / t2;
    obj += g * g * c2 / t;
    v2 += d * d / t2;
    nv += d / t2;
    nb += g * g * c2 / t2;
  }
  RidgePrediction p;
  p.lambda = lambda;
  p.gamma_hat = g;
  p.sigma_bar_sq = sigma_bar_sq;
  p.a1r = spec.signal_energy - bias;
  p.a2r = g * g / (alpha * alpha) * v2 / static_cast<double>(n);
  const double denom = singularity_guard(alpha, p.a2r, "ridge");
  p.risk = (p.a1r + alpha * sigma_bar_sq * p.a2r) / denom;
  p.objective = -obj + g * spec.signal_energy + g * sigma_bar_sq;
  p.residual_sq = g * g * (p.risk + sigma_bar_sq);
  p.nu1_hat = 2.0 * g * std::sqrt(p.risk + sigma_bar_sq) / std::sqrt(alpha);
  p.norm_sq = p.nu1_hat * p.nu1_hat / (4.0 * static_cast<double>(n)) * nv + nb;
  return p;
}

LsPrediction ls_predict(const ModelInstance& instance, const SpectralModel& spec, double alpha,
                        double sigma_bar_sq) {
  if (!(alpha > 1.0)) {
    throw Error(ErrorKind::RegimeError, fmt("LS needs alpha > 1, alpha", alpha));
  }
  double explained = 0.0;
  double norm_signal = 0.0;
  for (Eigen::Index i = 0; i < spec.dim(); ++i) {
    const double d = spec.eigvals(i);
    const double c2 = spec.cbar(i) * spec.cbar(i);
    explained += c2 / d;
    norm_signal += c2 / (d * d);
  }
  LsPrediction p;
  p.gamma_hat = 1.0 - 1.0 / alpha;
  p.sigma_bar_sq = sigma_bar_sq;
  p.a1r = spec.signal_energy - explained;
  p.a1r_compact = woodbury_offset(instance);
  const double total = p.a1r + sigma_bar_sq;
  p.risk = (alpha * p.a1r + sigma_bar_sq) / (alpha - 1.0);
  p.objective = total * (alpha - 1.0) / alpha;
  p.residual_sq = p.objective;
  p.norm_sq = norm_signal + total / (alpha - 1.0) * resolvent_trace(spec.eigvals, 0.0, 1.0, 1);
  p.nu1_hat = 2.0 * std::sqrt(total) * std::sqrt(alpha - 1.0) / alpha;
  return p;
}

CompactTerms ridge_compact_terms(const ModelInstance& instance, double gamma, double alpha,
                                 double lambda) {
  const DenseMatrix M = feature_covariance(instance);
  const auto n = M.rows();
  const DenseMatrix I = DenseMatrix::Identity(n, n);
  const Vector b = projected_signal(instance);

  const auto R = checked_llt(lambda * I + gamma * M, "lambda I + gamma M");
  const Vector u = R.solve(b);
  const Vector w = R.solve(u);
  CompactTerms t;
  t.a1 = null_risk(instance) - gamma * (b.dot(u) + lambda * b.dot(w));

  const DenseMatrix m_inv = checked_llt(M, "M").solve(I);
  const DenseMatrix P = symmetrize(gamma * I + lambda * m_inv);
  const DenseMatrix p_inv = checked_llt(P, "gamma I + lambda M^{-1}").solve(I);
  t.a2 = gamma * gamma / (alpha * alpha) * p_inv.squaredNorm() / static_cast<double>(n);
  return t;
}

CompactTerms gls_compact_terms(const ModelInstance& instance, double gamma, double alpha) {
  return ridge_compact_terms(instance, gamma, alpha, 1.0);
}

double gamma_gls_closed_uncorr(double alpha, double kappa, double c_L) {
  if (!(alpha > 0.0 && alpha < 1.0) || !(kappa > 0.0) || !(alpha * kappa < 1.0) || !(c_L >= 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "closed-form gamma needs 0<alpha<1, alpha*kappa<1, c_L>=0");
  }
  const double ak = alpha * kappa;
  const double disc = alpha * alpha * c_L * c_L - 2.0 * alpha * c_L * ((c_L + 2.0) * ak - 1.0) +
                      (c_L * ak + 1.0) * (c_L * ak + 1.0);
  const double num = std::sqrt(disc) + alpha * (c_L + 2.0) - c_L * ak - 1.0;
  return num / (2.0 * (1.0 - alpha) * (c_L + 1.0));
}

double overparam_limit_z(double kappa, double c_l) {
  if (!(kappa > 0.0 && kappa < 1.0) || !(c_l > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "limit needs 0 < kappa < 1 and c_l > 0");
  }
  const double r = c_l / kappa;
  const double disc = r * r + 2.0 * r - 2.0 * c_l * r + (c_l + 1.0) * (c_l + 1.0);
  return (std::sqrt(disc) + r - c_l - 1.0) / (2.0 * c_l);
}

double gls_limit_overparam(double kappa, double c_l, double sigma_bar_sq) {
  const double z = overparam_limit_z(kappa, c_l);
  const double cz = c_l * z;
  return (1.0 + kappa * cz * cz * sigma_bar_sq) / ((1.0 + cz) * (1.0 + cz) - kappa * cz * cz);
}

std::pair<double, RidgePrediction> optimal_lambda(const SpectralModel& spec, double alpha,
                                                  double sigma_bar_sq, LambdaRange range) {
  if (!(range.lo > 0.0) || range.hi < range.lo) {
    throw Error(ErrorKind::InvalidParameter, "lambda range needs 0 < lo <= hi");
  }
  const auto risk_at = [&](double t) {
    return ridge_predict(spec, alpha, std::exp(t), sigma_bar_sq).risk;
  };
  const double t_lo = std::log(range.lo);
  const double t_hi = std::log(range.hi);
  double t_best = t_lo;
  if (range.hi > range.lo) {
    // Coarse scan to pick the bracket, then golden section inside it.
    constexpr int kScan = 33;
    std::vector<double> ts(kScan);
    std::vector<double> vals(kScan);
    for (int i = 0; i < kScan; ++i) {
      ts[i] = t_lo + (t_hi - t_lo) * i / (kScan - 1);
      vals[i] = risk_at(ts[i]);
    }
    const auto best = std::min_element(vals.begin(), vals.end()) - vals.begin();
    const double a = ts[std::max<std::ptrdiff_t>(best - 1, 0)];
    const double b = ts[std::min<std::ptrdiff_t>(best + 1, kScan - 1)];
    const ScalarMinimum found = minimize_scalar(risk_at, a, b, 1e-10);
    t_best = found.value <= vals[best] ? found.argmin : ts[best];
  }
  const double lambda = std::exp(t_best);
  return {lambda, ridge_predict(spec, alpha, lambda, sigma_bar_sq)};
}

LrmEquivalent frm_to_lrm(const ModelInstance& instance) {
  const Covariance& noise = instance.response_noise_cov;
  if (!noise.is_scaled_identity()) {
    const DenseMatrix s = noise.matrix();
    const double diag = s(0, 0);
    const bool white = (s - diag * DenseMatrix::Identity(s.rows(), s.cols())).cwiseAbs().maxCoeff() <= 1e-14 * std::abs(diag);
    if (!white) {
      throw Error(ErrorKind::RegimeError, "FRM/LRM mapping needs white response noise");
    }
  }
  LrmEquivalent out;
  out.sigma_x = feature_covariance(instance);
  out.beta_ddot = checked_llt(out.sigma_x, "Sigma_X").solve(projected_signal(instance));
  out.offset = woodbury_offset(instance);
  out.sigma_ddot_sq = instance.sigma_bar_sq + out.offset;
  return out;
}

double frm_excess_risk(const ModelInstance& instance, const Vector& beta_hat) {
  if (beta_hat.size() != instance.dims.n) {
    std::ostringstream os;
    os << "beta_hat has length " << beta_hat.size() << ", expected n=" << instance.dims.n;
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
  const Vector r = instance.beta_bar - instance.loadings * beta_hat;
  return instance.factor_cov.quadratic_form(r) + instance.feature_noise_cov.quadratic_form(beta_hat);
}

double lrm_excess_risk(const LrmEquivalent& lrm, const Vector& beta_hat) {
  if (beta_hat.size() != lrm.beta_ddot.size()) {
    throw Error(ErrorKind::DimensionMismatch, "beta_hat length does not match the LRM");
  }
  const Vector d = lrm.beta_ddot - beta_hat;
  return d.dot(lrm.sigma_x * d);
}

}  // namespace frm
