#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "calderon/errors.hpp"
#include "calderon/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

using namespace calderon;

namespace {

Eigen::MatrixXd random_spd(int n, std::mt19937_64& rng, double shift = 0.1) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd x(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) x(i, j) = nd(rng);
  return x * x.transpose() + shift * Eigen::MatrixXd::Identity(n, n);
}

Eigen::MatrixXd random_sym(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd x(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) x(i, j) = nd(rng);
  return x + x.transpose();
}

// rho(X) rho(X^-1) from a general nonsymmetric eigensolver.
double brute_force_kappa(const Eigen::MatrixXd& x) {
  const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(x).eigenvalues();
  const Eigen::VectorXd mags = ev.cwiseAbs();
  return mags.maxCoeff() / mags.minCoeff();
}

}  // namespace

TEST_CASE("blocked Cholesky reconstructs the matrix") {
  std::mt19937_64 rng(1);
  for (int n : {1, 5, 64, 65, 150}) {
    const Eigen::MatrixXd a = random_spd(n, rng);
    const Eigen::MatrixXd l = spd_factor(SymMatrix(a));
    CHECK((l * l.transpose() - a).norm() <= 1e-12 * a.norm());
    CHECK(l.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().isZero(0.0));
  }
  Eigen::MatrixXd bad = random_spd(80, rng);
  bad(70, 70) = -1.0;
  CHECK_THROWS_AS(spd_factor(SymMatrix(bad)), FactorizationError);
}

TEST_CASE("symmetric eigensolver against a reference solver") {
  std::mt19937_64 rng(2);
  for (int n : {1, 2, 3, 17, 100}) {
    const Eigen::MatrixXd a = random_sym(n, rng);
    const Spectrum s = sym_eig(SymMatrix(a));
    const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues();
    CHECK((s.values - ref).cwiseAbs().maxCoeff() <= 1e-12 * a.norm());
    CHECK((a * s.vectors - s.vectors * s.values.asDiagonal()).norm() <= 1e-12 * a.norm());
    CHECK((s.vectors.transpose() * s.vectors - Eigen::MatrixXd::Identity(n, n)).norm() <= 1e-12);
    CHECK((sym_eigvals(SymMatrix(a)) - s.values).cwiseAbs().maxCoeff() <= 1e-13 * a.norm());
  }
}

TEST_CASE("eigensolver edge cases") {
  const Spectrum d = sym_eig(SymMatrix(Eigen::Vector3d(3.0, -1.0, 2.0).asDiagonal().toDenseMatrix()));
  CHECK(d.values(0) == -1.0);
  CHECK(d.values(1) == 2.0);
  CHECK(d.values(2) == 3.0);
  // Repeated eigenvalue: I + 1 1^T has spectrum {1, 1, 1, 5}.
  const Eigen::MatrixXd r = Eigen::MatrixXd::Identity(4, 4) + Eigen::MatrixXd::Ones(4, 4);
  const Eigen::VectorXd v = sym_eigvals(SymMatrix(r));
  CHECK(v(0) == doctest::Approx(1.0));
  CHECK(v(2) == doctest::Approx(1.0));
  CHECK(v(3) == doctest::Approx(5.0));
  // Second difference matrix: 2 - 2 cos(j pi / (n + 1)).
  const int n = 40;
  Eigen::MatrixXd t = 2.0 * Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i + 1 < n; ++i) t(i, i + 1) = t(i + 1, i) = -1.0;
  const Eigen::VectorXd tv = sym_eigvals(SymMatrix(t));
  for (int j = 1; j <= n; ++j)
    CHECK(tv(j - 1) == doctest::Approx(2.0 - 2.0 * std::cos(j * std::numbers::pi / (n + 1))).epsilon(1e-12));
}

TEST_CASE("kappa of a hand-built 3x3 pair against the cubic characteristic polynomial") {
  const Eigen::Matrix3d a{{4.0, 1.0, 0.5}, {1.0, 3.0, 0.2}, {0.5, 0.2, 2.0}};
  const Eigen::Matrix3d g{{2.0, -0.3, 0.1}, {-0.3, 1.0, 0.4}, {0.1, 0.4, 1.5}};
  const Eigen::Matrix3d x = g * a;
  // lambda^3 - c2 lambda^2 + c1 lambda - c0, roots by the trigonometric formula.
  const double c2 = x.trace();
  const double c1 = 0.5 * (c2 * c2 - (x * x).trace());
  const double c0 = x.determinant();
  const double p = c1 - c2 * c2 / 3.0;
  const double q = -2.0 * c2 * c2 * c2 / 27.0 + c2 * c1 / 3.0 - c0;
  const double r = 2.0 * std::sqrt(-p / 3.0);
  const double phi = std::acos(3.0 * q / (p * r));
  double lo = 1e300;
  double hi = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double root = r * std::cos((phi - 2.0 * std::numbers::pi * k) / 3.0) + c2 / 3.0;
    lo = std::min(lo, std::abs(root));
    hi = std::max(hi, std::abs(root));
  }
  CHECK(kappa(SymMatrix(g), SymMatrix(a)) == doctest::Approx(hi / lo).epsilon(1e-10));
}

TEST_CASE("kappa equals the nonsymmetric definition on small instances") {
  std::mt19937_64 rng(3);
  for (int n = 2; n <= 8; ++n) {
    const Eigen::MatrixXd a = random_spd(n, rng);
    const Eigen::MatrixXd g = random_spd(n, rng);
    const double k = kappa(SymMatrix(g), SymMatrix(a));
    CHECK(k == doctest::Approx(brute_force_kappa(g * a)).epsilon(1e-8));
    CHECK(k == doctest::Approx(kappa(SymMatrix(a), SymMatrix(g))).epsilon(1e-8));
    CHECK(k == doctest::Approx(kappa(SymMatrix(10.0 * g), SymMatrix(0.3 * a))).epsilon(1e-8));
  }
}

TEST_CASE("kappa of an exact inverse is one") {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd a = random_spd(50, rng, 1.0);
  const Eigen::MatrixXd inv = a.inverse();
  CHECK(kappa(SymMatrix(inv), SymMatrix(a)) == doctest::Approx(1.0).epsilon(1e-9));
  const ConditionEvaluator e{SymMatrix(a)};
  CHECK(e.size() == 50);
  CHECK(e.eigenvalues(SymMatrix(2.0 * inv)).cwiseAbs().minCoeff() == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("kappa rejects indefinite operands") {
  const Eigen::Matrix2d a{{1.0, 0.0}, {0.0, 2.0}};
  const Eigen::Matrix2d g{{1.0, 0.0}, {0.0, -1.0}};
  CHECK_THROWS_AS(kappa(SymMatrix(g), SymMatrix(a)), FactorizationError);
  CHECK_THROWS_AS(kappa(SymMatrix(a), SymMatrix(g)), FactorizationError);
  CHECK_THROWS_AS(kappa(SymMatrix(a), SymMatrix(Eigen::Matrix3d::Identity())), ParameterError);
}
