#include "frm/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "frm/error.hpp"

namespace frm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::NotPsd: return "NotPsd";
    case ErrorKind::SingularResolvent: return "SingularResolvent";
    case ErrorKind::NoBracket: return "NoBracket";
    case ErrorKind::NotMonotone: return "NotMonotone";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::RegimeError: return "RegimeError";
    case ErrorKind::InterpolationSingularity: return "InterpolationSingularity";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

void require_square(const DenseMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << " is " << m.rows() << "x" << m.cols();
    throw Error(ErrorKind::NonSquare, os.str());
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 make_engine(std::uint64_t master_seed, std::uint64_t stream_index) {
  const std::uint64_t a = splitmix64(master_seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(stream_index + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

DenseMatrix SpectralFactorization::reconstruct() const {
  return basis * eigenvalues.asDiagonal() * basis.transpose();
}

DenseMatrix symmetrize(const DenseMatrix& m) {
  require_square(m, "matrix");
  return 0.5 * (m + m.transpose());
}

SpectralFactorization sym_eig(const DenseMatrix& matrix) {
  require_square(matrix, "sym_eig input");
  if (!matrix.allFinite()) {
    throw Error(ErrorKind::InvalidParameter, "sym_eig input has non-finite entries");
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(symmetrize(matrix));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NotConverged, "symmetric eigensolver did not converge");
  }
  // Eigen returns eigenvalues in ascending order.
  return SpectralFactorization{solver.eigenvalues(), solver.eigenvectors()};
}

double psd_clamp_tolerance(const DenseMatrix& matrix) {
  const auto dim = static_cast<double>(std::max<Eigen::Index>(matrix.rows(), 1));
  return 1e-10 * std::abs(matrix.trace()) / dim;
}

PsdRoot psd_root(const DenseMatrix& matrix) {
  require_square(matrix, "psd_root input");
  const DenseMatrix sym = symmetrize(matrix);

  Eigen::LLT<DenseMatrix> llt(sym);
  if (llt.info() == Eigen::Success) {
    return PsdRoot{llt.matrixL()};
  }

  const SpectralFactorization spec = sym_eig(sym);
  const double tol = psd_clamp_tolerance(sym);
  const double smallest = spec.eigenvalues.size() > 0 ? spec.eigenvalues(0) : 0.0;
  if (smallest < -tol) {
    std::ostringstream os;
    os << "smallest eigenvalue " << smallest << " below -" << tol;
    throw Error(ErrorKind::NotPsd, os.str());
  }
  const Vector roots = spec.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  const DenseMatrix b = spec.basis * roots.asDiagonal();
  // b^T = Q R  =>  b b^T = R^T R, and R^T is lower triangular.
  Eigen::HouseholderQR<DenseMatrix> qr(b.transpose());
  DenseMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  return PsdRoot{r.transpose()};
}

double resolvent_trace(const Vector& eigenvalues, double shift, double scale, int power) {
  if (power != 1 && power != 2) {
    throw Error(ErrorKind::InvalidParameter, "resolvent power must be 1 or 2");
  }
  if (eigenvalues.size() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "empty spectrum");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double denom = shift + scale * eigenvalues(i);
    if (!(denom > 0.0)) {
      std::ostringstream os;
      os << "shift + scale * d_" << i << " = " << denom;
      throw Error(ErrorKind::SingularResolvent, os.str());
    }
    sum += power == 1 ? 1.0 / denom : 1.0 / (denom * denom);
  }
  return sum / static_cast<double>(eigenvalues.size());
}

double resolvent_trace(const SpectralFactorization& spec, double shift, double scale, int power) {
  return resolvent_trace(spec.eigenvalues, shift, scale, power);
}

double bisect(const std::function<double(double)>& f, double target, double lo, double hi,
              const BisectOptions& options) {
  if (!(hi > lo)) {
    throw Error(ErrorKind::InvalidParameter, "bisect requires lo < hi");
  }
  double g_lo = f(lo) - target;
  if (g_lo == 0.0) return lo;
  double g_hi = f(hi) - target;
  int expansions = 0;
  while (g_hi != 0.0 && std::signbit(g_lo) == std::signbit(g_hi)) {
    if (expansions++ >= options.max_expansions || !std::isfinite(hi)) {
      std::ostringstream os;
      os << "target " << target << " not straddled on [" << lo << ", " << hi << "]";
      throw Error(ErrorKind::NoBracket, os.str());
    }
    hi = lo + 2.0 * (hi - lo);
    g_hi = f(hi) - target;
  }
  if (g_hi == 0.0) return hi;

  for (int it = 0; it < options.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo < options.rel_tol * std::max(1.0, std::abs(mid))) return mid;
    const double g_mid = f(mid) - target;
    if (g_mid == 0.0) return mid;
    if (g_mid < std::min(g_lo, g_hi) || g_mid > std::max(g_lo, g_hi)) {
      std::ostringstream os;
      os << "value at " << mid << " falls outside the bracket values";
      throw Error(ErrorKind::NotMonotone, os.str());
    }
    if (std::signbit(g_mid) == std::signbit(g_lo)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
      g_hi = g_mid;
    }
  }
  return 0.5 * (lo + hi);
}

ScalarMinimum minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                              double rel_tol) {
  if (hi < lo) std::swap(lo, hi);
  ScalarMinimum best{lo, f(lo)};
  auto consider = [&best](double x, double v) {
    if (v < best.value) best = ScalarMinimum{x, v};
  };
  if (hi == lo) return best;
  consider(hi, f(hi));

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  consider(c, fc);
  consider(d, fd);
  while (b - a > rel_tol * std::max(1.0, std::abs(0.5 * (a + b)))) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
      consider(d, fd);
    }
  }
  if (fc == fd && best.value == fc && fc == f(lo)) {
    // Flat function: report the midpoint.
    const double mid = 0.5 * (lo + hi);
    return ScalarMinimum{mid, f(mid)};
  }
  return best;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed),
      stream_index_(stream_index),
      engine_(make_engine(master_seed, stream_index)) {}

double RngStream::normal() { return normal_(engine_); }

double RngStream::rademacher() { return (engine_() >> 63) ? 1.0 : -1.0; }

double RngStream::scaled_uniform() { return std::sqrt(12.0) * uniform_(engine_); }

Vector normal_stream(RngStream stream, Eigen::Index count) {
  Vector out(count);
  for (Eigen::Index i = 0; i < count; ++i) out(i) = stream.normal();
  return out;
}

double relative_frobenius(const DenseMatrix& a, const DenseMatrix& b) {
  const double denom = std::max(b.norm(), std::numeric_limits<double>::min());
  return (a - b).norm() / denom;
}

}  // namespace frm
