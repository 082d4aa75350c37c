#include <cmath>
#include <random>

#include "doctest.h"
#include "frm/error.hpp"
#include "frm/model.hpp"
#include "frm/numerics.hpp"
#include "oracles.hpp"

using namespace frm;

namespace {

DenseMatrix from_rows(const std::vector<std::vector<double>>& rows) {
  DenseMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

DenseMatrix random_spd(int dim, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  DenseMatrix b(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) b(i, j) = nd(gen);
  }
  return b * b.transpose() + 0.1 * DenseMatrix::Identity(dim, dim);
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an frm::Error");
  return ErrorKind::IoError;
}

}  // namespace

TEST_CASE("sym_eig on identity and diagonal inputs") {
  const auto id = sym_eig(DenseMatrix::Identity(3, 3));
  CHECK((id.eigenvalues - Vector::Ones(3)).norm() < 1e-14);
  CHECK((id.basis.transpose() * id.basis - DenseMatrix::Identity(3, 3)).norm() < 1e-12);

  DenseMatrix d = DenseMatrix::Zero(2, 2);
  d(0, 0) = 5;
  d(1, 1) = 2;
  const auto s = sym_eig(d);
  CHECK(s.eigenvalues(0) == doctest::Approx(2.0));
  CHECK(s.eigenvalues(1) == doctest::Approx(5.0));
  CHECK(std::abs(s.basis(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(s.basis(0, 1)) == doctest::Approx(1.0));
}

TEST_CASE("sym_eig of a 3x3 Toeplitz mix matches its characteristic polynomial") {
  const DenseMatrix a = from_rows(oracle::toeplitz_mix(0.5, 3, 1.0));
  const auto s = sym_eig(a);
  // The antisymmetric vector (1, 0, -1) has eigenvalue 1 - 0.125; the
  // symmetric block [[1.125, 0.25 sqrt2], [0.25 sqrt2, 1]] gives the rest.
  const double tr = 2.125, det = 1.125 - 0.125;
  const double disc = std::sqrt(tr * tr - 4 * det);
  std::vector<double> expected = {0.875, (tr - disc) / 2, (tr + disc) / 2};
  std::sort(expected.begin(), expected.end());
  for (int i = 0; i < 3; ++i) CHECK(s.eigenvalues(i) == doctest::Approx(expected[i]).epsilon(1e-12));
  CHECK(s.eigenvalues.sum() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(s.eigenvalues.maxCoeff() <= 1.5);
  CHECK(s.eigenvalues.minCoeff() > 0.0);
}

TEST_CASE("sym_eig invariants on random symmetric matrices") {
  for (int trial = 0; trial < 5; ++trial) {
    const DenseMatrix a = random_spd(12, 100 + trial) - 3.0 * DenseMatrix::Identity(12, 12);
    const auto s = sym_eig(a);
    CHECK(relative_frobenius(s.reconstruct(), a) < 1e-9);
    CHECK((s.basis.transpose() * s.basis - DenseMatrix::Identity(12, 12)).norm() < 1e-10);
    CHECK(std::abs(s.eigenvalues.sum() - a.trace()) <= 1e-9 * std::abs(a.trace()) + 1e-12);
    for (int i = 1; i < 12; ++i) CHECK(s.eigenvalues(i - 1) <= s.eigenvalues(i));
  }
}

TEST_CASE("sym_eig rejects bad input") {
  CHECK(kind_of([] { sym_eig(DenseMatrix::Zero(2, 3)); }) == ErrorKind::NonSquare);
  DenseMatrix bad = DenseMatrix::Identity(2, 2);
  bad(0, 1) = std::nan("");
  CHECK(kind_of([&] { sym_eig(bad); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { symmetrize(DenseMatrix::Zero(1, 2)); }) == ErrorKind::NonSquare);
}

TEST_CASE("psd_root examples") {
  CHECK((psd_root(DenseMatrix::Identity(4, 4)).factor - DenseMatrix::Identity(4, 4)).norm() < 1e-14);

  DenseMatrix d = DenseMatrix::Zero(2, 2);
  d(0, 0) = 4;
  d(1, 1) = 9;
  const DenseMatrix r = psd_root(d).factor;
  CHECK(r(0, 0) == doctest::Approx(2.0));
  CHECK(r(1, 1) == doctest::Approx(3.0));
  CHECK(r(0, 1) == 0.0);

  const DenseMatrix t = from_rows(oracle::toeplitz_mix(0.3, 4, 1.0));
  const DenseMatrix f = psd_root(t).factor;
  CHECK((f * f.transpose() - t).norm() < 1e-10);
  CHECK(f.isLowerTriangular());
}

TEST_CASE("psd_root handles semidefinite input and clamps round-off") {
  Vector v(3);
  v << 1, 2, 3;
  const DenseMatrix rank_one = v * v.transpose();
  const auto root = psd_root(rank_one);
  CHECK(root.factor.isLowerTriangular(1e-12));
  CHECK(relative_frobenius(root.factor * root.factor.transpose(), rank_one) < 1e-9);

  DenseMatrix nearly = rank_one;
  nearly(2, 2) -= 1e-13;
  CHECK_NOTHROW(psd_root(nearly));

  DenseMatrix negative = DenseMatrix::Identity(2, 2);
  negative(1, 1) = -0.5;
  CHECK(kind_of([&] { psd_root(negative); }) == ErrorKind::NotPsd);
}

TEST_CASE("psd_root round-trips a reconstructed matrix") {
  const DenseMatrix a = random_spd(10, 7);
  const DenseMatrix rebuilt = sym_eig(a).reconstruct();
  const DenseMatrix f = psd_root(rebuilt).factor;
  CHECK(relative_frobenius(f * f.transpose(), rebuilt) < 1e-8);
}

TEST_CASE("resolvent_trace examples") {
  Vector ones = Vector::Ones(2);
  CHECK(resolvent_trace(ones, 1.0, 1.0, 1) == doctest::Approx(0.5));
  Vector d(2);
  d << 2, 4;
  CHECK(resolvent_trace(d, 0.0, 1.0, 2) == doctest::Approx(0.15625).epsilon(1e-15));
  CHECK(resolvent_trace(d, 3.0, 0.0, 1) == 1.0 / 3.0);
  CHECK(resolvent_trace(d, 1.0, 2.0, 1) < resolvent_trace(d, 1.0, 1.0, 1));
  CHECK(resolvent_trace(d, 2.0, 1.0, 1) < resolvent_trace(d, 1.0, 1.0, 1));
  CHECK(kind_of([&] { resolvent_trace(d, -2.0, 0.5, 1); }) == ErrorKind::SingularResolvent);
  CHECK(kind_of([&] { resolvent_trace(d, 1.0, 1.0, 3); }) == ErrorKind::InvalidParameter);
}

TEST_CASE("resolvent_trace closes the GLS fixed point at the reference point") {
  const auto s = oracle::table1_point(600, 3.0, 0.5, 4.0, 0.2);
  const auto gls = oracle::two_level_gls(s);
  Vector d = Vector::Ones(s.n);
  d.tail(s.k).setConstant(static_cast<double>(s.d_top()));
  const double value = resolvent_trace(d, 1.0, static_cast<double>(gls.gamma), 1);
  CHECK(std::abs(value - (1.0 - static_cast<double>(s.alpha()))) < 1e-10);
  CHECK(static_cast<double>(gls.gamma) == doctest::Approx(0.2892).epsilon(2e-4));
}

TEST_CASE("bisect examples") {
  CHECK(bisect([](double x) { return x; }, 0.5, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  // 1/(1+x) = 1/2 needs the bracket [0, 1] expanded to include 1.
  const double root = bisect([](double x) { return 1.0 / (1.0 + x); }, 0.5, 0.0, 0.25);
  CHECK(root == doctest::Approx(1.0).epsilon(1e-11));
  const double again = bisect([](double x) { return 1.0 / (1.0 + x); }, 0.5, root, 3.0);
  CHECK(again == doctest::Approx(root).epsilon(1e-11));

  CHECK(kind_of([] { bisect([](double) { return 1.0; }, 2.0, 0.0, 1.0); }) == ErrorKind::NoBracket);
  CHECK(kind_of([] { bisect([](double x) { return x > 0.4 && x < 0.6 ? 5.0 : x; }, 0.2, 0.0, 1.0); }) ==
        ErrorKind::NotMonotone);
}

TEST_CASE("minimize_scalar examples") {
  auto q = minimize_scalar([](double x) { return (x - 2) * (x - 2); }, 0.0, 5.0);
  CHECK(q.argmin == doctest::Approx(2.0).epsilon(1e-8));
  auto a = minimize_scalar([](double x) { return std::abs(x); }, -1.0, 3.0);
  CHECK(std::abs(a.argmin) < 1e-8);
  auto flat = minimize_scalar([](double) { return 1.0; }, 0.0, 4.0);
  CHECK(flat.argmin == doctest::Approx(2.0));
  auto edge = minimize_scalar([](double x) { return x; }, 1.0, 3.0);
  CHECK(edge.argmin == 1.0);
  auto point = minimize_scalar([](double x) { return x * x; }, 1.5, 1.5);
  CHECK(point.argmin == 1.5);
}

TEST_CASE("normal_stream determinism and statistics") {
  const Vector a = normal_stream(RngStream(42, 0), 1000);
  const Vector b = normal_stream(RngStream(42, 0), 1000);
  CHECK(a == b);
  CHECK(a != normal_stream(RngStream(43, 0), 1000));

  const Vector big = normal_stream(RngStream(7, 3), 1000000);
  const double mean = big.mean();
  const double var = (big.array() - mean).square().sum() / (big.size() - 1);
  CHECK(std::abs(mean) < 4e-3);
  CHECK(std::abs(var - 1.0) < 1e-2);

  const Vector s0 = normal_stream(RngStream(7, 0), 100000);
  const Vector s1 = normal_stream(RngStream(7, 1), 100000);
  const Vector c0 = s0.array() - s0.mean();
  const Vector c1 = s1.array() - s1.mean();
  CHECK(std::abs(c0.dot(c1) / (c0.norm() * c1.norm())) < 0.02);
}

TEST_CASE("alternative entry distributions have unit variance") {
  RngStream r(11, 0);
  RngStream u(11, 1);
  double rs = 0, rq = 0, us = 0, uq = 0;
  const int count = 200000;
  for (int i = 0; i < count; ++i) {
    const double x = r.rademacher();
    CHECK((x == 1.0 || x == -1.0));
    rs += x;
    rq += x * x;
    const double y = u.scaled_uniform();
    us += y;
    uq += y * y;
    CHECK(std::abs(y) <= std::sqrt(3.0));
  }
  CHECK(std::abs(rs / count) < 1e-2);
  CHECK(rq / count == 1.0);
  CHECK(std::abs(us / count) < 1e-2);
  CHECK(std::abs(uq / count - 1.0) < 1e-2);
}

TEST_CASE("error messages carry their kind") {
  const Error e(ErrorKind::RegimeError, "alpha must exceed 1");
  CHECK(std::string(e.what()) == "RegimeError: alpha must exceed 1");
  CHECK(to_string(ErrorKind::InterpolationSingularity) == "InterpolationSingularity");
}
