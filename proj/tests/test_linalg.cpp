#include <doctest.h>

#include <vector>

#include "aaegd/error.hpp"
#include "aaegd/linalg.hpp"
#include "support.hpp"

using namespace aaegd;
using testing::Rng;

TEST_CASE("regularized least squares: hand examples") {
  Matrix u(2, 1);
  Vector rhs(2);
  rhs << 1, 0;

  u << 1, 0;
  CHECK(solve_regularized_ls(u, rhs, 0.0)(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(solve_regularized_ls(u, rhs, 1.0)(0) == doctest::Approx(0.5).epsilon(1e-15));

  u << 2, 0;
  CHECK(solve_regularized_ls(u, rhs, 0.0)(0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("regularized least squares matches normal equations on random 6x3") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix u = rng.matrix(6, 3);
    const Vector rhs = rng.vector(6);
    const Vector w = solve_regularized_ls(u, rhs, 1e-10);
    const Vector expected = testing::normal_equation_oracle(u, rhs, 1e-10);
    CHECK((w - expected).norm() <= 1e-6 * expected.norm());
  }
}

TEST_CASE("regularized least squares stationarity and shrinkage") {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = rng.integer(1, 12);
    const Index p = rng.integer(1, 6);
    const Matrix u = rng.matrix(n, p);
    const Vector rhs = rng.vector(n);
    const double lambda = std::pow(10.0, rng.uniform(-6, 2));
    const Vector w = solve_regularized_ls(u, rhs, lambda);
    const Vector grad = (u.transpose() * u + lambda * Matrix::Identity(p, p)) * w - u.transpose() * rhs;
    const double scale = (u.transpose() * rhs).norm() + 1e-300;
    CHECK(grad.norm() <= 1e-8 * scale);

    const Vector w_more = solve_regularized_ls(u, rhs, 10.0 * lambda);
    CHECK(w_more.norm() <= w.norm() * (1.0 + 1e-12));
  }
}

TEST_CASE("regularized least squares errors") {
  Matrix rank_deficient(3, 2);
  rank_deficient << 1, 2, 1, 2, 1, 2;
  Vector rhs = Vector::Ones(3);
  try {
    solve_regularized_ls(rank_deficient, rhs, 0.0);
    FAIL("expected SingularSystem");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularSystem);
  }
  // The same system is fine once regularized.
  CHECK_NOTHROW(solve_regularized_ls(rank_deficient, rhs, 1e-8));

  try {
    solve_regularized_ls(rank_deficient, Vector::Ones(4), 1.0);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
  CHECK_THROWS_AS(solve_regularized_ls(rank_deficient, rhs, -1.0), Error);
}

TEST_CASE("spectral bounds examples") {
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 1, 10;
  auto b = spectral_bounds(d);
  CHECK(b.mu == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(b.L == doctest::Approx(10.0).epsilon(1e-14));

  b = spectral_bounds(Matrix::Identity(5, 5));
  CHECK(b.mu == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(b.L == doctest::Approx(1.0).epsilon(1e-14));

  Matrix a(2, 2);
  a << 2, 1, 1, 2;
  b = spectral_bounds(a);
  CHECK(b.mu == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(b.L == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(b.condition_number() == doctest::Approx(3.0));
  CHECK(b.optimal_gd_step() == doctest::Approx(0.5));
  CHECK(b.gd_contraction() == doctest::Approx(0.5));
}

TEST_CASE("spectral bounds bracket Rayleigh quotients") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = rng.integer(2, 15);
    const Matrix g = rng.matrix(n, n);
    const Matrix a = 0.5 * (g + g.transpose());
    const auto b = spectral_bounds(a);
    for (int k = 0; k < 50; ++k) {
      const Vector v = rng.vector(n);
      const double q = v.dot(a * v) / v.squaredNorm();
      CHECK(q >= b.mu - 1e-9);
      CHECK(q <= b.L + 1e-9);
    }
  }
}

TEST_CASE("spectral bounds rejects a nonsymmetric matrix") {
  Matrix a(2, 2);
  a << 1, 2, 0, 1;
  try {
    spectral_bounds(a);
    FAIL("expected NotSymmetric");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotSymmetric);
  }
}

TEST_CASE("spectral norm agrees with singular values") {
  Rng rng(14);
  const Matrix a = rng.matrix(40, 12);
  const double expected = Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
  CHECK(spectral_norm(a) == doctest::Approx(expected).epsilon(1e-7));
}

TEST_CASE("checked construction") {
  const std::vector<double> data = {1, 2, 3, 4, 5, 6};
  const Matrix m = make_matrix(2, 3, data);
  CHECK(m(0, 2) == 3.0);
  CHECK(m(1, 0) == 4.0);
  CHECK_THROWS_AS(make_matrix(2, 2, data), Error);
  const std::vector<double> bad = {1.0, std::nan("")};
  CHECK_THROWS_AS(make_vector(bad), Error);
  CHECK(make_vector(data).size() == 6);
}
