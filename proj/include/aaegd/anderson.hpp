#pragma once

#include <cstddef>
#include <deque>
#include <limits>

#include "aaegd/optimizers.hpp"

namespace aaegd {

/// Window length m, period q, relaxation beta and Tikhonov weight lambda.
/// The mix runs at iterations k with k % q == 0 and k != 0.
struct AAConfig {
  static constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();

  std::size_t m = 5;
  std::size_t q = 5;
  double beta = 1.0;
  double lambda = 1e-10;

  void validate() const;
  bool fires_at(std::size_t k) const { return k != 0 && q != kNever && k % q == 0; }

  static AAConfig disabled() { return {1, kNever, 1.0, 1e-10}; }
};

/// FIFO store of the last m+1 pairs (x_j, g_j), g_j being whatever the base
/// stepper produced from x_j. Index 0 is the oldest pair.
class AndersonWindow {
 public:
  explicit AndersonWindow(std::size_t m);

  void push(Vector x, Vector g);
  void clear() { entries_.clear(); }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t capacity() const { return m_; }

  const Vector& point(std::size_t i) const { return entries_.at(i).x; }
  const Vector& output(std::size_t i) const { return entries_.at(i).g; }
  const Vector& residual(std::size_t i) const { return entries_.at(i).r; }

 private:
  struct Entry {
    Vector x;
    Vector g;
    Vector r;  // g - x
  };
  std::size_t m_;
  std::deque<Entry> entries_;
};

/// Affine weights, oldest first; they sum to one.
struct MixingCoefficients {
  Vector alpha;

  double sum() const { return alpha.sum(); }
};

/// Weights minimizing ||sum_j alpha_j R_j|| subject to sum alpha_j = 1, in the
/// unconstrained form: w = argmin ||R_k - U w||^2 + lambda ||w||^2 with
/// columns U_j = R_k - R_j, then alpha_j = w_j and alpha_k = 1 - sum w.
MixingCoefficients solve_coefficients(const AndersonWindow& window, double lambda);

// (1 - beta) sum alpha_j x_j + beta sum alpha_j g_j
Vector mix(const AndersonWindow& window, const MixingCoefficients& alpha, double beta);

/// Base method (GD or AEGD) with the Anderson mix applied on the schedule of
/// cfg. The window records base-step pairs; a mixed point only becomes the
/// next iterate. AEGD's energy is carried through mixes untouched. With
/// lambda == 0 a singular coefficient solve keeps the plain step and is
/// logged in trace.aa_fallbacks.
ConvergenceTrace run_aa(Method method, const ObjectiveFunction& f, const Vector& x0, double eta, const AAConfig& cfg,
                        const StoppingRule& stop, const TraceOptions& options = {});

/// Chebyshev envelope 2 gamma^k / (1 + gamma^{2k}) with
/// gamma = (1 - sqrt(1 - rho)) / (1 + sqrt(1 - rho)); zero once k >= d.
double chebyshev_gain(double rho, std::size_t k, std::size_t d);

}  // namespace aaegd
