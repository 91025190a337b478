#pragma once

#include <cstddef>
#include <functional>

#include "aaegd/anderson.hpp"
#include "aaegd/objectives.hpp"
#include "aaegd/optimizers.hpp"

namespace aaegd {

// y = x - eta grad f(x), x' = prox(y)
StepRecord pga_step(const CompositeProblem& p, const Vector& x, double eta);

// Nesterov extrapolation weight (k - 1) / (k + 2), k >= 1.
double nesterov_weight(std::size_t k);

/// y = x + w_k (x - x_prev), x' = prox(y - eta grad f(y)) with the
/// (k - 1)/(k + 2) weight.
StepRecord apga_step(const CompositeProblem& p, const Vector& x, const Vector& x_prev, std::size_t k, double eta);

using MomentumSchedule = std::function<double(std::size_t k)>;

ConvergenceTrace run_pga(const CompositeProblem& p, const Vector& x0, double eta, const StoppingRule& stop,
                         const TraceOptions& options = {});
ConvergenceTrace run_apga(const CompositeProblem& p, const Vector& x0, double eta, const StoppingRule& stop,
                          const TraceOptions& options = {}, const MomentumSchedule& schedule = nesterov_weight);

struct GuardedAAOptions {
  // After an accepted mix, also continue the auxiliary sequence from the
  // mixed point (otherwise only x is replaced).
  bool replace_auxiliary = true;
};

/// Energy-adaptive proximal gradient with a guarded Anderson mix.
///
/// Each iteration takes an AEGD step on the smooth part from x_k to y_{k+1}
/// and sets x_{k+1} = prox(y_{k+1}). The window holds the auxiliary pairs
/// (y_k, y_{k+1}). On scheduled iterations the mixed y is proxed and kept
/// only if f(x_aa) <= f(x_k) - (eta / 2) ||grad f(x_k)||^2. Rejections leave
/// the window as is. A failed coefficient solve keeps the plain step and is
/// logged in trace.aa_fallbacks.
ConvergenceTrace run_aa_aegd_prox(const CompositeProblem& p, const Vector& x0, double eta, const AAConfig& cfg,
                                  const StoppingRule& stop, const TraceOptions& options = {},
                                  const GuardedAAOptions& guard = {});

/// Baseline: the same guarded mix applied to PGA's auxiliary map
/// y -> prox(y) - eta grad f(prox(y)).
ConvergenceTrace run_aa_pga(const CompositeProblem& p, const Vector& x0, double eta, const AAConfig& cfg,
                            const StoppingRule& stop, const TraceOptions& options = {},
                            const GuardedAAOptions& guard = {});

// Sufficient-decrease test used to gate AA candidates.
bool passes_descent_guard(double candidate_value, const Evaluation& at_current, double eta);

}  // namespace aaegd
