#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <utility>

#include "aaegd/linalg.hpp"
#include "aaegd/prox.hpp"

namespace aaegd {

/// A differentiable objective f together with the energy shift c used by
/// the energy-adaptive methods (they need f(x) + c > 0).
///
/// Value type; the stored callables must be reentrant so one objective can be
/// evaluated from several threads at once.
class ObjectiveFunction {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;

  ObjectiveFunction(Index dimension, ValueFn value, GradientFn gradient, double shift = 1.0);

  Index dimension() const { return dimension_; }
  double shift() const { return shift_; }

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;

  ObjectiveFunction with_shift(double shift) const;

 private:
  Index dimension_;
  ValueFn value_;
  GradientFn gradient_;
  double shift_;
};

/// f(x) = 0.5 x^T A x - b^T x with A symmetric positive definite.
struct QuadraticProblem {
  Matrix A;
  Vector b;
  Vector minimizer;
  SpectralBounds bounds;

  double min_value() const;
  // Shift defaults to max(1, 1 - f(x*)) so that f + c >= 1 everywhere.
  ObjectiveFunction objective() const;
};

QuadraticProblem make_quadratic(const Matrix& A, const Vector& b);

// Spectrum log-uniform on [1, kappa], rotated by a seeded random orthogonal
// matrix; b ~ N(0, I).
QuadraticProblem make_quadratic(Index dim, double kappa, std::uint64_t seed);

ObjectiveFunction rosenbrock_2d();

/// min f(x) + h(x) with f smooth and h handled through its prox.
struct CompositeProblem {
  ObjectiveFunction smooth;
  ProxOperator prox;
  double lipschitz;  // estimate of the Lipschitz constant of grad f
};

// f(x) = mean log(1 + exp(-y_i a_i^T x)) + mu ||x||^2, h = indicator{||x||_inf <= 1}.
CompositeProblem make_logistic(const Matrix& data, const Vector& labels, double mu);

// f(x) = ||A x - b||^2 / (2M) + mu ||x||^2, h = indicator{x >= 0}.
CompositeProblem make_nnls(const Matrix& data, const Vector& targets, double mu);

// Composite problem with h = 0, used to compare proximal solvers against
// their unconstrained counterparts.
CompositeProblem unconstrained(const ObjectiveFunction& f, double lipschitz);

struct Dataset {
  Matrix features;
  Vector targets;
};

/// Synthetic stand-ins for real datasets. The feature matrix is
/// U diag(s) V^T with orthonormal U, V and singular values s log-spaced so
/// that s_max / s_min = kappa and s_max = scale * sqrt(M); the largest
/// eigenvalue of A^T A / M is then scale^2.
///
/// Classification labels are sign(A w + 0.1 noise) for a Gaussian w;
/// regression targets are A x_true (x_true >= 0 with about half of its
/// entries zero) rescaled to unit root-mean-square, plus 0.01 noise.
Dataset make_synthetic_classification(Index samples, Index features, double kappa, std::uint64_t seed,
                                      double scale = 1.0);
Dataset make_synthetic_regression(Index samples, Index features, double kappa, std::uint64_t seed,
                                  double scale = 1.0);

/// Feature scale for which the Lipschitz estimate of the regularized
/// problem is kappa times its strong-convexity modulus 2 mu.
double logistic_feature_scale(double kappa, double mu);
double nnls_feature_scale(double kappa, double mu);

/// Reads a rectangular numeric CSV. The column at label_column becomes the
/// target vector; all others, in order, form the feature matrix.
Dataset load_csv_dataset(const std::filesystem::path& path, std::size_t label_column, bool has_header = false);

}  // namespace aaegd
