#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Dense>

namespace aaegd {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Checked construction from row-major data. Rejects empty shapes and
// non-finite entries.
Matrix make_matrix(Index rows, Index cols, std::span<const double> row_major);
Vector make_vector(std::span<const double> entries);

bool all_finite(const Eigen::Ref<const Matrix>& m);

/// Minimizer of 0.5*||rhs - U w||^2 + 0.5*lambda*||w||^2.
///
/// Solved by Householder QR of the stacked system [U; sqrt(lambda) I], so
/// the normal matrix U^T U is never formed. With lambda == 0 the system is
/// rejected as singular when a diagonal entry of the triangular factor falls
/// below 1e-12 times the largest one.
Vector solve_regularized_ls(const Eigen::Ref<const Matrix>& U, const Eigen::Ref<const Vector>& rhs,
                            double lambda);

struct SpectralBounds {
  double mu;  // smallest eigenvalue
  double L;   // largest eigenvalue

  double condition_number() const { return L / mu; }
  double optimal_gd_step() const { return 2.0 / (L + mu); }
  double gd_contraction() const { return (L - mu) / (L + mu); }
};

// Extreme eigenvalues of a symmetric matrix (dense eigensolver).
SpectralBounds spectral_bounds(const Eigen::Ref<const Matrix>& A);

// ||A||_2 by power iteration on A^T A from a fixed pseudo-random start.
double spectral_norm(const Eigen::Ref<const Matrix>& A, double tolerance = 1e-8,
                     int max_iterations = 10000);

}  // namespace aaegd
