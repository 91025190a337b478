#include "aaegd/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "aaegd/error.hpp"

namespace aaegd {

ObjectiveFunction::ObjectiveFunction(Index dimension, ValueFn value, GradientFn gradient, double shift)
    : dimension_(dimension), value_(std::move(value)), gradient_(std::move(gradient)), shift_(shift) {
  require(dimension_ >= 1, ErrorKind::InvalidArgument, "objective dimension must be positive");
  require(value_ && gradient_, ErrorKind::InvalidArgument, "objective callables must be set");
  require(std::isfinite(shift_), ErrorKind::InvalidArgument, "energy shift must be finite");
}

double ObjectiveFunction::value(const Vector& x) const {
  require(x.size() == dimension_, ErrorKind::DimensionMismatch, "point has the wrong dimension");
  return value_(x);
}

Vector ObjectiveFunction::gradient(const Vector& x) const {
  require(x.size() == dimension_, ErrorKind::DimensionMismatch, "point has the wrong dimension");
  return gradient_(x);
}

ObjectiveFunction ObjectiveFunction::with_shift(double shift) const {
  ObjectiveFunction copy = *this;
  require(std::isfinite(shift), ErrorKind::InvalidArgument, "energy shift must be finite");
  copy.shift_ = shift;
  return copy;
}

// --- quadratic -------------------------------------------------------------

double QuadraticProblem::min_value() const { return -0.5 * b.dot(minimizer); }

ObjectiveFunction QuadraticProblem::objective() const {
  const double shift = std::max(1.0, 1.0 - min_value());
  return ObjectiveFunction(
      A.rows(), [A = A, b = b](const Vector& x) { return 0.5 * x.dot(A * x) - b.dot(x); },
      [A = A, b = b](const Vector& x) -> Vector { return A * x - b; }, shift);
}

QuadraticProblem make_quadratic(const Matrix& A, const Vector& b) {
  require(A.rows() == A.cols(), ErrorKind::DimensionMismatch, "quadratic matrix must be square");
  require(b.size() == A.rows(), ErrorKind::DimensionMismatch, "b length differs from A");
  const SpectralBounds bounds = spectral_bounds(A);
  require(bounds.mu > 0.0, ErrorKind::InvalidArgument, "quadratic matrix must be positive definite");
  Vector minimizer = A.ldlt().solve(b);
  return {A, b, std::move(minimizer), bounds};
}

namespace {

// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the sign
// of R's diagonal folded into Q.
Matrix random_orthogonal(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix g(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  for (Index j = 0; j < n; ++j)
    if (qr.matrixQR()(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

// Orthonormal columns (rows x cols, rows >= cols).
Matrix random_orthonormal_columns(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  for (Index j = 0; j < cols; ++j)
    if (qr.matrixQR()(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

Vector log_spaced(Index n, double lo, double hi) {
  Vector v(n);
  if (n == 1) {
    v(0) = lo;
    return v;
  }
  const double ratio = std::log(hi / lo);
  for (Index i = 0; i < n; ++i) v(i) = lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(n - 1));
  v(0) = lo;
  v(n - 1) = hi;
  return v;
}

}  // namespace

QuadraticProblem make_quadratic(Index dim, double kappa, std::uint64_t seed) {
  require(dim >= 2, ErrorKind::InvalidArgument, "quadratic dimension must be at least 2");
  require(kappa > 1.0 && std::isfinite(kappa), ErrorKind::InvalidArgument, "condition number must exceed 1");
  std::mt19937_64 rng(seed);
  const Matrix q = random_orthogonal(dim, rng);
  const Vector eig = log_spaced(dim, 1.0, kappa);
  Matrix A = q * eig.asDiagonal() * q.transpose();
  A = 0.5 * (A + A.transpose()).eval();

  std::normal_distribution<double> normal;
  Vector b(dim);
  for (Index i = 0; i < dim; ++i) b(i) = normal(rng);

  Vector minimizer = q * (q.transpose() * b).cwiseQuotient(eig);
  // Report the constructed spectrum rather than a re-estimate of it.
  return {std::move(A), std::move(b), std::move(minimizer), SpectralBounds{1.0, kappa}};
}

// --- Rosenbrock ------------------------------------------------------------

ObjectiveFunction rosenbrock_2d() {
  return ObjectiveFunction(
      2,
      [](const Vector& x) {
        const double a = 1.0 - x(0);
        const double b = x(1) - x(0) * x(0);
        return a * a + 100.0 * b * b;
      },
      [](const Vector& x) -> Vector {
        const double b = x(1) - x(0) * x(0);
        Vector g(2);
        g(0) = -2.0 * (1.0 - x(0)) - 400.0 * x(0) * b;
        g(1) = 200.0 * b;
        return g;
      });
}

// --- composite problems ----------------------------------------------------

namespace {

// log(1 + exp(t)) without overflow.
double softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

// 1 / (1 + exp(-t))
double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

CompositeProblem make_logistic(const Matrix& data, const Vector& labels, double mu) {
  const Index samples = data.rows();
  require(samples >= 1 && data.cols() >= 1, ErrorKind::InvalidArgument, "empty data matrix");
  require(labels.size() == samples, ErrorKind::DimensionMismatch, "label count differs from sample count");
  require(mu >= 0.0, ErrorKind::InvalidArgument, "mu must be nonnegative");
  for (Index i = 0; i < samples; ++i)
    if (labels(i) != 1.0 && labels(i) != -1.0)
      fail(ErrorKind::BadLabel, "label at row " + std::to_string(i) + " is not +1 or -1");

  const double m = static_cast<double>(samples);
  // Row i of ya is y_i a_i^T.
  const Matrix ya = labels.asDiagonal() * data;
  auto value = [ya, mu, m](const Vector& x) {
    const Vector margins = ya * x;
    double sum = 0.0;
    for (Index i = 0; i < margins.size(); ++i) sum += softplus(-margins(i));
    return sum / m + mu * x.squaredNorm();
  };
  auto gradient = [ya, mu, m](const Vector& x) -> Vector {
    const Vector margins = ya * x;
    Vector weights(margins.size());
    for (Index i = 0; i < margins.size(); ++i) weights(i) = -sigmoid(-margins(i));
    return ya.transpose() * weights / m + 2.0 * mu * x;
  };
  const double norm = spectral_norm(data);
  return {ObjectiveFunction(data.cols(), std::move(value), std::move(gradient)), box_linf_prox(1.0),
          norm * norm / (4.0 * m) + 2.0 * mu};
}

CompositeProblem make_nnls(const Matrix& data, const Vector& targets, double mu) {
  const Index samples = data.rows();
  require(samples >= 1 && data.cols() >= 1, ErrorKind::InvalidArgument, "empty data matrix");
  require(targets.size() == samples, ErrorKind::DimensionMismatch, "target count differs from sample count");
  require(mu >= 0.0, ErrorKind::InvalidArgument, "mu must be nonnegative");

  const double m = static_cast<double>(samples);
  auto value = [data, targets, mu, m](const Vector& x) {
    return (data * x - targets).squaredNorm() / (2.0 * m) + mu * x.squaredNorm();
  };
  auto gradient = [data, targets, mu, m](const Vector& x) -> Vector {
    return data.transpose() * (data * x - targets) / m + 2.0 * mu * x;
  };
  const double norm = spectral_norm(data);
  return {ObjectiveFunction(data.cols(), std::move(value), std::move(gradient)), nonneg_prox(),
          norm * norm / m + 2.0 * mu};
}

CompositeProblem unconstrained(const ObjectiveFunction& f, double lipschitz) {
  require(lipschitz > 0.0, ErrorKind::InvalidArgument, "Lipschitz estimate must be positive");
  return {f, identity_prox(), lipschitz};
}

// --- synthetic data --------------------------------------------------------

namespace {

Matrix conditioned_matrix(Index samples, Index features, double kappa, double scale, std::mt19937_64& rng) {
  require(samples >= features && features >= 1, ErrorKind::InvalidArgument,
          "synthetic data needs at least as many samples as features");
  require(kappa >= 1.0, ErrorKind::InvalidArgument, "condition number must be at least 1");
  const Matrix u = random_orthonormal_columns(samples, features, rng);
  const Matrix v = random_orthogonal(features, rng);
  require(scale > 0.0, ErrorKind::InvalidArgument, "feature scale must be positive");
  const double top = scale * std::sqrt(static_cast<double>(samples));
  const Vector s = log_spaced(features, top / kappa, top);
  return u * s.asDiagonal() * v.transpose();
}

}  // namespace

Dataset make_synthetic_classification(Index samples, Index features, double kappa, std::uint64_t seed,
                                      double scale) {
  std::mt19937_64 rng(seed);
  Matrix a = conditioned_matrix(samples, features, kappa, scale, rng);
  std::normal_distribution<double> normal;
  Vector w(features);
  for (Index i = 0; i < features; ++i) w(i) = normal(rng);
  w /= std::sqrt(static_cast<double>(features));
  const Vector scores = a * w;
  Vector labels(samples);
  for (Index i = 0; i < samples; ++i) labels(i) = scores(i) + 0.1 * normal(rng) >= 0.0 ? 1.0 : -1.0;
  return {std::move(a), std::move(labels)};
}

Dataset make_synthetic_regression(Index samples, Index features, double kappa, std::uint64_t seed,
                                  double scale) {
  std::mt19937_64 rng(seed);
  Matrix a = conditioned_matrix(samples, features, kappa, scale, rng);
  std::normal_distribution<double> normal;
  std::bernoulli_distribution active(0.5);
  Vector x_true(features);
  for (Index i = 0; i < features; ++i) x_true(i) = active(rng) ? std::abs(normal(rng)) : 0.0;
  Vector targets = a * x_true;
  const double rms = targets.norm() / std::sqrt(static_cast<double>(samples));
  if (rms > 0.0) targets /= rms;
  for (Index i = 0; i < samples; ++i) targets(i) += 0.01 * normal(rng);
  return {std::move(a), std::move(targets)};
}

double logistic_feature_scale(double kappa, double mu) {
  require(kappa > 1.0 && mu > 0.0, ErrorKind::InvalidArgument, "need kappa > 1 and mu > 0");
  return std::sqrt(8.0 * mu * (kappa - 1.0));
}

double nnls_feature_scale(double kappa, double mu) {
  require(kappa > 1.0 && mu > 0.0, ErrorKind::InvalidArgument, "need kappa > 1 and mu > 0");
  return std::sqrt(2.0 * mu * (kappa - 1.0));
}

}  // namespace aaegd
