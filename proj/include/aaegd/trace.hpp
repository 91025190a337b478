#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "aaegd/linalg.hpp"

namespace aaegd {

/// State at iterate x_k.
struct IterationRecord {
  std::size_t iteration = 0;
  double value = 0.0;          // f(x_k)
  double gradient_norm = 0.0;  // ||grad f(x_k)||_2
  double step_norm = 0.0;      // ||x_k - x_{k-1}||_2, zero for k = 0
  // The Anderson branch ran at k-1 and produced a candidate. Unguarded
  // drivers always use it; guarded ones report the outcome in aa_accepted.
  bool aa_applied = false;
  std::optional<bool> aa_accepted;
  std::optional<double> delta;      // gain of the mix that produced x_k
  std::optional<double> r_min;      // energy range, energy-adaptive methods only
  std::optional<double> r_max;
  double time_ms = 0.0;  // wall clock spent producing x_k
};

struct ConvergenceTrace {
  std::string method;
  std::vector<IterationRecord> records;
  // Optional full vectors, one per record, filled when requested.
  std::vector<Vector> gradients;
  std::vector<Vector> iterates;
  // y_k of the proximal drivers, recorded alongside iterates.
  std::vector<Vector> auxiliary_iterates;
  // Iterations k at which the coefficient solve failed and the plain step
  // was kept.
  std::vector<std::size_t> aa_fallbacks;
  // Sequence the Anderson window was fed from: "iterate" or "auxiliary".
  std::string window_source = "iterate";
  std::string stop_reason;
  Vector final_point;

  std::size_t iterations() const { return records.empty() ? 0 : records.size() - 1; }
  const IterationRecord& last() const { return records.back(); }

  // k values at which the Anderson branch ran (record k+1 carries the flag).
  std::vector<std::size_t> aa_iterations() const;
  std::size_t aa_attempts() const;
  std::size_t aa_accepts() const;
};

struct TraceOptions {
  bool record_gradients = false;
  bool record_iterates = false;
};

/// Termination tests, checked in order at every recorded iterate:
/// gradient tolerance, value threshold, step tolerance, iteration cap.
struct StoppingRule {
  std::size_t max_iterations = 100000;
  // Absolute tolerance on ||grad f||. When unset and check_gradient is
  // true, 1e-8 * (1 + |f(x_0)|) is used.
  std::optional<double> gradient_tolerance;
  bool check_gradient = true;
  // Stop once f(x_k) - value_reference < value_threshold.
  std::optional<double> value_threshold;
  double value_reference = 0.0;
  // Stop once ||x_k - x_{k-1}|| <= step_tolerance (k >= 1).
  std::optional<double> step_tolerance;
};

}  // namespace aaegd
