#include "aaegd/linalg.hpp"

#include <cmath>
#include <random>

#include "aaegd/error.hpp"

namespace aaegd {

bool all_finite(const Eigen::Ref<const Matrix>& m) { return m.allFinite(); }

Matrix make_matrix(Index rows, Index cols, std::span<const double> row_major) {
  require(rows >= 1 && cols >= 1, ErrorKind::InvalidArgument, "matrix needs at least one row and column");
  require(static_cast<Index>(row_major.size()) == rows * cols, ErrorKind::DimensionMismatch,
          "entry count does not match rows*cols");
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = row_major[static_cast<std::size_t>(i * cols + j)];
  require(m.allFinite(), ErrorKind::InvalidArgument, "matrix entries must be finite");
  return m;
}

Vector make_vector(std::span<const double> entries) {
  require(!entries.empty(), ErrorKind::InvalidArgument, "vector needs at least one entry");
  Vector v = Eigen::Map<const Vector>(entries.data(), static_cast<Index>(entries.size()));
  require(v.allFinite(), ErrorKind::InvalidArgument, "vector entries must be finite");
  return v;
}

Vector solve_regularized_ls(const Eigen::Ref<const Matrix>& U, const Eigen::Ref<const Vector>& rhs,
                            double lambda) {
  const Index n = U.rows();
  const Index p = U.cols();
  require(n >= 1 && p >= 1, ErrorKind::InvalidArgument, "least-squares matrix is empty");
  require(rhs.size() == n, ErrorKind::DimensionMismatch, "rhs length differs from the row count of U");
  require(lambda >= 0.0 && std::isfinite(lambda), ErrorKind::InvalidArgument,
          "regularization must be finite and nonnegative");

  const bool regularized = lambda > 0.0;
  const Index rows = regularized ? n + p : n;
  if (!regularized && n < p) fail(ErrorKind::SingularSystem, "fewer rows than unknowns without regularization");

  Matrix stacked(rows, p);
  Vector target = Vector::Zero(rows);
  stacked.topRows(n) = U;
  target.head(n) = rhs;
  if (regularized) stacked.bottomRows(p) = std::sqrt(lambda) * Matrix::Identity(p, p);

  Eigen::HouseholderQR<Matrix> qr(stacked);
  const auto R = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
  const Vector diag = qr.matrixQR().diagonal().head(p).cwiseAbs();
  const double largest = diag.maxCoeff();
  if (!regularized && (largest == 0.0 || diag.minCoeff() < 1e-12 * largest))
    fail(ErrorKind::SingularSystem, "normal equations are rank deficient");

  Vector qt_target = qr.householderQ().adjoint() * target;
  Vector w = R.solve(qt_target.head(p));
  if (!w.allFinite()) fail(ErrorKind::SingularSystem, "least-squares solution is not finite");
  return w;
}

SpectralBounds spectral_bounds(const Eigen::Ref<const Matrix>& A) {
  require(A.rows() == A.cols() && A.rows() >= 1, ErrorKind::DimensionMismatch, "matrix must be square");
  const double scale = A.cwiseAbs().maxCoeff();
  const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
  require(asym <= 1e-12 * scale, ErrorKind::NotSymmetric, "matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(A, Eigen::EigenvaluesOnly);
  const Vector& ev = solver.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

double spectral_norm(const Eigen::Ref<const Matrix>& A, double tolerance, int max_iterations) {
  require(A.size() > 0, ErrorKind::InvalidArgument, "empty matrix");
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unif(0.5, 1.5);
  Vector v(A.cols());
  for (Index i = 0; i < v.size(); ++i) v(i) = unif(rng);
  v.normalize();

  double sigma2 = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    Vector w = A.transpose() * (A * v);
    const double next = w.norm();
    if (next == 0.0) return 0.0;
    v = w / next;
    const bool done = std::abs(next - sigma2) <= tolerance * next;
    sigma2 = next;
    if (done) break;
  }
  return std::sqrt(sigma2);
}

}  // namespace aaegd
