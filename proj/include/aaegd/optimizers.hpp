#pragma once

#include <optional>
#include <utility>

#include "aaegd/objectives.hpp"
#include "aaegd/trace.hpp"

namespace aaegd {

enum class Method { GD, AEGD };

/// Per-coordinate energy r and the shift c it approximates sqrt(f + c) with.
/// Entries start positive and never increase from step to step. At large
/// step sizes an entry can underflow to zero, which freezes its coordinate.
struct EnergyState {
  Vector r;
  double c = 1.0;
};

struct StepRecord {
  Vector x_new;
  Vector residual;                       // x_new - x_old
  std::optional<Vector> effective_step;  // eta_k per coordinate (AEGD only)
};

// f and grad f at one point; lets drivers reuse evaluations.
struct Evaluation {
  double value;
  Vector gradient;
};

Evaluation evaluate(const ObjectiveFunction& f, const Vector& x);

// r_0 = sqrt(f(x_0) + c) * 1
EnergyState initial_energy(const ObjectiveFunction& f, const Vector& x0);

StepRecord gd_step(const ObjectiveFunction& f, const Vector& x, double eta);
StepRecord gd_step(const Vector& x, const Evaluation& at_x, double eta);

/// One energy-adaptive step:
///   v = grad f / (2 sqrt(f + c)),  r' = r / (1 + 2 eta v^2),  x' = x - 2 eta r' v
/// (all entrywise). The returned record carries eta * r' / sqrt(f + c).
std::pair<StepRecord, EnergyState> aegd_step(const ObjectiveFunction& f, const Vector& x, const EnergyState& state,
                                             double eta);
std::pair<StepRecord, EnergyState> aegd_step(const Vector& x, const Evaluation& at_x, const EnergyState& state,
                                             double eta);

// eta * r_after / sqrt(f(x) + c): the per-coordinate step AEGD actually took.
Vector effective_step(const EnergyState& state_after, const ObjectiveFunction& f, const Vector& x, double eta);

ConvergenceTrace run_optimizer(Method method, const ObjectiveFunction& f, const Vector& x0, double eta,
                               const StoppingRule& stop, const TraceOptions& options = {});

std::string_view to_string(Method method);

}  // namespace aaegd
