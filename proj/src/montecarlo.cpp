#include "frm/montecarlo.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "frm/error.hpp"
#include "frm/theory.hpp"

namespace frm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double draw(RngStream& stream, EntryDistribution dist) {
  switch (dist) {
    case EntryDistribution::Gaussian: return stream.normal();
    case EntryDistribution::Rademacher: return stream.rademacher();
    case EntryDistribution::ScaledUniform: return stream.scaled_uniform();
  }
  return stream.normal();
}

void fill_rows(DenseMatrix& out, RngStream& stream, EntryDistribution dist) {
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) out(i, j) = draw(stream, dist);
  }
}

// Solves the SPD system a x = b. On factorization failure the diagonal is
// shifted by 1e-12 * trace / dim once before giving up.
Vector spd_solve(DenseMatrix a, const Vector& b, const char* what) {
  Eigen::LLT<DenseMatrix> llt(a);
  if (llt.info() != Eigen::Success) {
    a.diagonal().array() += 1e-12 * a.trace() / static_cast<double>(a.rows());
    llt.compute(a);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorKind::IllConditioned, std::string(what) + " is not numerically SPD");
    }
  }
  Vector x = llt.solve(b);
  const double scale = std::max(b.norm(), std::numeric_limits<double>::min());
  const double rel = (a * x - b).norm() / scale;
  if (!(rel < 1e-8)) {
    std::ostringstream os;
    os << what << " solve residual " << rel;
    throw Error(ErrorKind::IllConditioned, os.str());
  }
  return x;
}

DenseMatrix gram_rows(const DenseMatrix& X) {
  DenseMatrix g = DenseMatrix::Zero(X.rows(), X.rows());
  g.selfadjointView<Eigen::Lower>().rankUpdate(X);
  return g.selfadjointView<Eigen::Lower>();
}

DenseMatrix gram_cols(const DenseMatrix& X) {
  DenseMatrix g = DenseMatrix::Zero(X.cols(), X.cols());
  g.selfadjointView<Eigen::Lower>().rankUpdate(X.transpose());
  return g.selfadjointView<Eigen::Lower>();
}

FieldStats stats(const std::vector<TrialResult>& trials, double TrialResult::*field) {
  const auto n = static_cast<double>(trials.size());
  double sum = 0.0;
  for (const auto& t : trials) sum += t.*field;
  FieldStats s;
  s.mean = sum / n;
  if (trials.size() > 1) {
    double sq = 0.0;
    for (const auto& t : trials) {
      const double d = t.*field - s.mean;
      sq += d * d;
    }
    s.stdev = std::sqrt(sq / (n - 1.0));
  }
  s.std_error = s.stdev / std::sqrt(n);
  return s;
}

std::vector<TrialResult> run_one_trial(const ModelInstance& instance,
                                       const std::vector<EstimatorKind>& kinds,
                                       std::uint64_t master_seed, int t) {
  const SampledData data = sample_data(instance, RngStream(master_seed, static_cast<std::uint64_t>(t)));
  std::vector<TrialResult> out;
  out.reserve(kinds.size());
  for (const auto& kind : kinds) out.push_back(evaluate(instance, kind, data));
  return out;
}

std::vector<Aggregate> reduce(std::vector<std::vector<TrialResult>> per_trial, std::size_t kinds) {
  std::vector<Aggregate> out;
  for (std::size_t j = 0; j < kinds; ++j) {
    std::vector<TrialResult> column;
    column.reserve(per_trial.size());
    for (auto& row : per_trial) column.push_back(row[j]);
    out.push_back(aggregate(std::move(column)));
  }
  return out;
}

[[noreturn]] void rethrow_for_trial(const std::exception_ptr& ptr, int t) {
  try {
    std::rethrow_exception(ptr);
  } catch (const Error& e) {
    throw Error(e.kind(), "trial " + std::to_string(t) + ": " + e.what());
  }
}

void check_trials(int trials) {
  if (trials < 1) throw Error(ErrorKind::InvalidParameter, "trials must be >= 1");
}

}  // namespace

std::string estimator_name(const EstimatorKind& kind) {
  return std::visit(overloaded{[](const Gls&) { return std::string("gls"); },
                               [](const Ridge&) { return std::string("ridge"); },
                               [](const Ls&) { return std::string("ls"); }},
                    kind);
}

SampledData sample_data(const ModelInstance& instance, RngStream stream) {
  const auto& d = instance.dims;
  const auto dist = instance.entry_distribution;
  DenseMatrix Z(d.m, d.k);
  DenseMatrix E(d.m, d.n);
  Vector v(d.m);
  fill_rows(Z, stream, dist);
  fill_rows(E, stream, dist);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = draw(stream, dist);

  const DenseMatrix factors = instance.factor_cov.color_rows(Z);
  SampledData out;
  out.X = factors * instance.loadings + instance.feature_noise_cov.color_rows(E);
  out.y = factors * instance.beta_bar + instance.response_noise_cov.color_vector(v);
  return out;
}

Vector fit(const EstimatorKind& kind, const DenseMatrix& X, const Vector& y) {
  const auto m = X.rows();
  const auto n = X.cols();
  if (y.size() != m) throw Error(ErrorKind::DimensionMismatch, "y length differs from rows of X");
  return std::visit(
      overloaded{
          [&](const Gls&) -> Vector {
            if (!(m < n)) throw Error(ErrorKind::RegimeError, "GLS interpolation needs m < n");
            return X.transpose() * spd_solve(gram_rows(X), y, "X X^T");
          },
          [&](const Ridge& r) -> Vector {
            if (!(r.lambda > 0.0)) throw Error(ErrorKind::RegimeError, "ridge needs lambda > 0");
            if (m < n) {
              // Dual form X^T (lambda m I + X X^T)^{-1} y on the smaller Gram matrix.
              DenseMatrix a = gram_rows(X);
              a.diagonal().array() += r.lambda * static_cast<double>(m);
              return X.transpose() * spd_solve(std::move(a), y, "lambda m I + X X^T");
            }
            DenseMatrix a = gram_cols(X);
            a.diagonal().array() += r.lambda * static_cast<double>(m);
            return spd_solve(std::move(a), X.transpose() * y, "lambda m I + X^T X");
          },
          [&](const Ls&) -> Vector {
            if (!(m > n)) throw Error(ErrorKind::RegimeError, "least squares needs m > n");
            return spd_solve(gram_cols(X), X.transpose() * y, "X^T X");
          },
      },
      kind);
}

TrialResult evaluate(const ModelInstance& instance, const EstimatorKind& kind,
                     const SampledData& data) {
  const Vector beta = fit(kind, data.X, data.y);
  TrialResult r;
  r.norm_sq = beta.squaredNorm();
  r.residual_sq = (data.y - data.X * beta).squaredNorm() / static_cast<double>(data.X.rows());
  r.objective = std::visit(overloaded{[&](const Gls&) { return r.norm_sq; },
                                      [&](const Ridge& k) { return k.lambda * r.norm_sq + r.residual_sq; },
                                      [&](const Ls&) { return r.residual_sq; }},
                           kind);
  r.excess_risk = frm_excess_risk(instance, beta);
  return r;
}

Aggregate aggregate(std::vector<TrialResult> trials) {
  if (trials.empty()) throw Error(ErrorKind::InvalidParameter, "cannot aggregate zero trials");
  Aggregate a;
  a.count = static_cast<int>(trials.size());
  a.norm_sq = stats(trials, &TrialResult::norm_sq);
  a.objective = stats(trials, &TrialResult::objective);
  a.residual_sq = stats(trials, &TrialResult::residual_sq);
  a.excess_risk = stats(trials, &TrialResult::excess_risk);
  a.trials = std::move(trials);
  return a;
}

std::vector<Aggregate> run_trials(const ModelInstance& instance,
                                  const std::vector<EstimatorKind>& kinds, int trials,
                                  std::uint64_t master_seed) {
  check_trials(trials);
  std::vector<std::vector<TrialResult>> per_trial(static_cast<std::size_t>(trials));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < trials; ++t) {
    try {
      per_trial[t] = run_one_trial(instance, kinds, master_seed, t);
    } catch (...) {
      failures[t] = std::current_exception();
    }
  }
  for (int t = 0; t < trials; ++t) {
    if (failures[t]) rethrow_for_trial(failures[t], t);
  }
  return reduce(std::move(per_trial), kinds.size());
}

Aggregate run_trials(const ModelInstance& instance, const EstimatorKind& kind, int trials,
                     std::uint64_t master_seed) {
  return run_trials(instance, std::vector<EstimatorKind>{kind}, trials, master_seed).front();
}

std::vector<Aggregate> run_trials_serial(const ModelInstance& instance,
                                         const std::vector<EstimatorKind>& kinds, int trials,
                                         std::uint64_t master_seed) {
  check_trials(trials);
  std::vector<std::vector<TrialResult>> per_trial;
  per_trial.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    try {
      per_trial.push_back(run_one_trial(instance, kinds, master_seed, t));
    } catch (...) {
      rethrow_for_trial(std::current_exception(), t);
    }
  }
  return reduce(std::move(per_trial), kinds.size());
}

}  // namespace frm
