#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "aaegd/linalg.hpp"
#include "aaegd/objectives.hpp"

namespace testing {

using aaegd::Index;
using aaegd::Matrix;
using aaegd::Vector;

// Seeded generators for property tests.
struct Rng {
  explicit Rng(std::uint64_t seed) : engine(seed) {}

  double normal() { return normal_dist(engine); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine); }

  Vector vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = normal();
    return v;
  }
  Matrix matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = normal();
    return m;
  }

  std::mt19937_64 engine;
  std::normal_distribution<double> normal_dist;
};

// Normal-equation solve of (U^T U + lambda I) w = U^T rhs via LDL^T.
inline Vector normal_equation_oracle(const Matrix& U, const Vector& rhs, double lambda) {
  const Matrix gram = U.transpose() * U + lambda * Matrix::Identity(U.cols(), U.cols());
  return gram.ldlt().solve(U.transpose() * rhs);
}

// min ||R alpha||^2 + lambda sum_{j<last} alpha_j^2 s.t. 1^T alpha = 1, solved
// through its KKT system. The ridge on the older weights is the same term the
// unconstrained form puts on w.
inline Vector kkt_oracle(const std::vector<Vector>& residuals, double lambda) {
  const Index p = static_cast<Index>(residuals.size());
  const Index n = residuals.front().size();
  Matrix R(n, p);
  for (Index j = 0; j < p; ++j) R.col(j) = residuals[static_cast<std::size_t>(j)];
  Matrix reg = Matrix::Zero(p, p);
  for (Index j = 0; j + 1 < p; ++j) reg(j, j) = lambda;
  Matrix kkt = Matrix::Zero(p + 1, p + 1);
  kkt.topLeftCorner(p, p) = 2.0 * (R.transpose() * R + reg);
  kkt.block(0, p, p, 1).setOnes();
  kkt.block(p, 0, 1, p).setOnes();
  Vector rhs = Vector::Zero(p + 1);
  rhs(p) = 1.0;
  const Vector sol = kkt.fullPivLu().solve(rhs);
  return sol.head(p);
}

inline Vector central_difference(const aaegd::ObjectiveFunction& f, const Vector& x) {
  const double h = 1e-6 * (1.0 + x.norm());
  Vector g(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    Vector xp = x;
    Vector xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f.value(xp) - f.value(xm)) / (2.0 * h);
  }
  return g;
}

inline double relative_error(const Vector& a, const Vector& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

}  // namespace testing
