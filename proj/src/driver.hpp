#pragma once

// Shared bookkeeping for the iteration drivers: record construction,
// stopping tests, divergence guard and per-iteration timing.

#include <chrono>
#include <cmath>
#include <string>

#include "aaegd/error.hpp"
#include "aaegd/optimizers.hpp"
#include "aaegd/trace.hpp"

namespace aaegd::detail {

inline constexpr double kDivergenceThreshold = 1e300;

inline void check_gradient(const Vector& g) {
  if (!g.allFinite()) fail(ErrorKind::NonFiniteGradient, "gradient has NaN or Inf entries");
}

class TraceBuilder {
 public:
  TraceBuilder(std::string method, const StoppingRule& stop, const TraceOptions& options, double initial_value)
      : stop_(stop), options_(options), clock_start_(std::chrono::steady_clock::now()) {
    trace_.method = std::move(method);
    gradient_tolerance_ = stop.gradient_tolerance.value_or(1e-8 * (1.0 + std::abs(initial_value)));
  }

  ConvergenceTrace& trace() { return trace_; }

  // Appends the record for x_k and returns true when the run should stop.
  bool push(const Vector& x, const Evaluation& eval, double step_norm, IterationRecord extra = {}) {
    if (!std::isfinite(eval.value) || std::abs(eval.value) > kDivergenceThreshold)
      fail(ErrorKind::Diverged, trace_.method + " diverged at iteration " + std::to_string(trace_.records.size()));
    check_gradient(eval.gradient);

    const auto now = std::chrono::steady_clock::now();
    IterationRecord rec = std::move(extra);
    rec.iteration = trace_.records.size();
    rec.value = eval.value;
    rec.gradient_norm = eval.gradient.norm();
    rec.step_norm = step_norm;
    rec.time_ms = std::chrono::duration<double, std::milli>(now - clock_start_).count();
    clock_start_ = now;
    trace_.records.push_back(rec);
    if (options_.record_gradients) trace_.gradients.push_back(eval.gradient);
    if (options_.record_iterates) trace_.iterates.push_back(x);
    trace_.final_point = x;
    return should_stop(rec);
  }

  ConvergenceTrace finish() { return std::move(trace_); }

 private:
  bool should_stop(const IterationRecord& rec) {
    if (stop_.check_gradient && rec.gradient_norm <= gradient_tolerance_) {
      trace_.stop_reason = "gradient_tolerance";
      return true;
    }
    if (stop_.value_threshold && rec.value - stop_.value_reference < *stop_.value_threshold) {
      trace_.stop_reason = "value_threshold";
      return true;
    }
    if (stop_.step_tolerance && rec.iteration >= 1 && rec.step_norm <= *stop_.step_tolerance) {
      trace_.stop_reason = "step_tolerance";
      return true;
    }
    if (rec.iteration >= stop_.max_iterations) {
      trace_.stop_reason = "max_iterations";
      return true;
    }
    return false;
  }

  StoppingRule stop_;
  TraceOptions options_;
  double gradient_tolerance_;
  ConvergenceTrace trace_;
  std::chrono::steady_clock::time_point clock_start_;
};

inline void add_energy(IterationRecord& rec, const EnergyState& state) {
  rec.r_min = state.r.minCoeff();
  rec.r_max = state.r.maxCoeff();
}

}  // namespace aaegd::detail
