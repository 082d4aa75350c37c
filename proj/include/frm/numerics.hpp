#pragma once

// Numerical substrate: symmetric factorizations, resolvent traces, scalar
// root finding and minimization, seeded normal streams.

#include <cstdint>
#include <functional>
#include <random>
#include <utility>

#include <Eigen/Dense>

namespace frm {

using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Eigenvalues ascending; basis columns are the matching orthonormal eigenvectors.
struct SpectralFactorization {
  Vector eigenvalues;
  DenseMatrix basis;

  Eigen::Index dimension() const { return eigenvalues.size(); }
  DenseMatrix reconstruct() const;
};

/// Lower-triangular `factor` with factor * factor^T equal to the source matrix.
struct PsdRoot {
  DenseMatrix factor;

  Eigen::Index dimension() const { return factor.rows(); }
};

/// Returns (m + m^T) / 2. Throws NonSquare.
DenseMatrix symmetrize(const DenseMatrix& m);

/// Symmetric eigendecomposition of the symmetrized input.
/// Throws NonSquare, InvalidParameter (non-finite entries), NotConverged.
SpectralFactorization sym_eig(const DenseMatrix& matrix);

/// Tolerance below which negative eigenvalues are clamped to zero in psd_root.
double psd_clamp_tolerance(const DenseMatrix& matrix);

/// Lower-triangular square root of a symmetric PSD matrix. Tries Cholesky
/// first; semidefinite inputs go through a clamped eigendecomposition
/// followed by a QR step to recover a triangular factor. Throws NotPsd.
PsdRoot psd_root(const DenseMatrix& matrix);

/// (1/dim) * sum_i 1 / (shift + scale * d_i)^power, power in {1, 2}.
/// Throws SingularResolvent when some shift + scale * d_i <= 0.
double resolvent_trace(const SpectralFactorization& spec, double shift, double scale, int power);
double resolvent_trace(const Vector& eigenvalues, double shift, double scale, int power);

struct BisectOptions {
  double rel_tol = 1e-12;
  int max_expansions = 64;
  int max_iterations = 400;
};

/// Solves f(x) = target for a strictly monotone f on [lo, hi]. When the
/// target is not straddled, hi is doubled (up to 64 times) before giving up.
/// Throws NoBracket, NotMonotone.
double bisect(const std::function<double(double)>& f, double target, double lo, double hi,
              const BisectOptions& options = {});

struct ScalarMinimum {
  double argmin;
  double value;
};

/// Golden-section search on [lo, hi]. The endpoints are evaluated as well
/// and the best sampled point is returned.
ScalarMinimum minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                              double rel_tol = 1e-10);

/// Counter-addressed standard-normal stream. The engine is std::mt19937_64
/// seeded through splitmix64 of (master_seed, stream_index); deviates come
/// from std::normal_distribution, so sequences are bit-reproducible for a
/// given standard library build.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  double normal();
  /// +1 or -1 with equal probability.
  double rademacher();
  /// sqrt(12) * Uniform[-1/2, 1/2]; zero mean, unit variance.
  double scaled_uniform();

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{-0.5, 0.5};
};

/// First `count` standard normals of the stream. Takes the stream by value,
/// so the same stream always yields the same vector.
Vector normal_stream(RngStream stream, Eigen::Index count);

/// Relative Frobenius distance ||a - b||_F / max(||b||_F, tiny).
double relative_frobenius(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace frm
