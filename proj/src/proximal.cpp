#include "aaegd/proximal.hpp"

#include <cmath>

#include "aaegd/diagnostics.hpp"
#include "aaegd/error.hpp"
#include "driver.hpp"

namespace aaegd {

StepRecord pga_step(const CompositeProblem& p, const Vector& x, double eta) {
  require(eta > 0.0, ErrorKind::InvalidArgument, "step size must be positive");
  const Vector g = p.smooth.gradient(x);
  detail::check_gradient(g);
  Vector x_new = p.prox(x - eta * g, eta);
  Vector residual = x_new - x;
  return {std::move(x_new), std::move(residual), std::nullopt};
}

double nesterov_weight(std::size_t k) {
  require(k >= 1, ErrorKind::InvalidArgument, "momentum index starts at 1");
  const auto kd = static_cast<double>(k);
  return (kd - 1.0) / (kd + 2.0);
}

StepRecord apga_step(const CompositeProblem& p, const Vector& x, const Vector& x_prev, std::size_t k, double eta) {
  require(eta > 0.0, ErrorKind::InvalidArgument, "step size must be positive");
  require(x.size() == x_prev.size(), ErrorKind::DimensionMismatch, "previous iterate has the wrong length");
  const Vector y = x + nesterov_weight(k) * (x - x_prev);
  const Vector g = p.smooth.gradient(y);
  detail::check_gradient(g);
  Vector x_new = p.prox(y - eta * g, eta);
  Vector residual = x_new - x;
  return {std::move(x_new), std::move(residual), std::nullopt};
}

ConvergenceTrace run_pga(const CompositeProblem& p, const Vector& x0, double eta, const StoppingRule& stop,
                         const TraceOptions& options) {
  require(eta > 0.0, ErrorKind::InvalidArgument, "step size must be positive");
  Vector x = x0;
  Evaluation eval = evaluate(p.smooth, x);
  detail::TraceBuilder builder("PGA", stop, options, eval.value);
  if (builder.push(x, eval, 0.0)) return builder.finish();
  while (true) {
    Vector x_new = p.prox(x - eta * eval.gradient, eta);
    const double step_norm = (x_new - x).norm();
    x = std::move(x_new);
    eval = evaluate(p.smooth, x);
    if (builder.push(x, eval, step_norm)) break;
  }
  return builder.finish();
}

ConvergenceTrace run_apga(const CompositeProblem& p, const Vector& x0, double eta, const StoppingRule& stop,
                          const TraceOptions& options, const MomentumSchedule& schedule) {
  require(eta > 0.0, ErrorKind::InvalidArgument, "step size must be positive");
  require(static_cast<bool>(schedule), ErrorKind::InvalidArgument, "momentum schedule must be set");
  Vector x = x0;
  Vector x_prev = x0;
  Evaluation eval = evaluate(p.smooth, x);
  detail::TraceBuilder builder("APGA", stop, options, eval.value);
  if (builder.push(x, eval, 0.0)) return builder.finish();
  for (std::size_t k = 1;; ++k) {
    const Vector y = x + schedule(k) * (x - x_prev);
    const Vector g = p.smooth.gradient(y);
    detail::check_gradient(g);
    Vector x_new = p.prox(y - eta * g, eta);
    const double step_norm = (x_new - x).norm();
    x_prev = std::move(x);
    x = std::move(x_new);
    eval = evaluate(p.smooth, x);
    if (builder.push(x, eval, step_norm)) break;
  }
  return builder.finish();
}

bool passes_descent_guard(double candidate_value, const Evaluation& at_current, double eta) {
  return candidate_value <= at_current.value - 0.5 * eta * at_current.gradient.squaredNorm();
}

namespace {

enum class BaseKind { PGA, AEGD };

ConvergenceTrace run_guarded(BaseKind kind, const CompositeProblem& p, const Vector& x0, double eta,
                             const AAConfig& cfg, const StoppingRule& stop, const TraceOptions& options,
                             const GuardedAAOptions& guard) {
  require(eta > 0.0, ErrorKind::InvalidArgument, "step size must be positive");
  require(x0.size() == p.smooth.dimension(), ErrorKind::DimensionMismatch, "x0 has the wrong dimension");
  cfg.validate();

  const std::string name = kind == BaseKind::AEGD ? (cfg.q == AAConfig::kNever ? "AEGD-prox" : "AA-AEGD-prox")
                                                  : (cfg.q == AAConfig::kNever ? "PGA-aux" : "AA-PGA");
  Vector x = x0;
  Vector y = x0;
  Evaluation eval = evaluate(p.smooth, x);
  detail::TraceBuilder builder(name, stop, options, eval.value);
  builder.trace().window_source = "auxiliary";

  std::optional<EnergyState> energy;
  IterationRecord first;
  if (kind == BaseKind::AEGD) {
    energy = initial_energy(p.smooth, x);
    detail::add_energy(first, *energy);
  }
  if (options.record_iterates) builder.trace().auxiliary_iterates.push_back(y);
  if (builder.push(x, eval, 0.0, first)) return builder.finish();

  AndersonWindow window(cfg.m);
  std::vector<Vector> residuals;
  for (std::size_t k = 0;; ++k) {
    IterationRecord rec;
    Vector y_next;
    if (kind == BaseKind::AEGD) {
      auto [s, e] = aegd_step(x, eval, *energy, eta);
      y_next = std::move(s.x_new);
      energy = std::move(e);
      detail::add_energy(rec, *energy);
    } else {
      detail::check_gradient(eval.gradient);
      y_next = x - eta * eval.gradient;
    }
    Vector x_next = p.prox(y_next, eta);
    window.push(y, y_next);

    if (cfg.fires_at(k)) {
      try {
        const MixingCoefficients alpha = solve_coefficients(window, cfg.lambda);
        Vector y_aa = mix(window, alpha, cfg.beta);
        Vector x_aa = p.prox(y_aa, eta);
        rec.aa_applied = true;
        const bool accepted = passes_descent_guard(p.smooth.value(x_aa), eval, eta);
        rec.aa_accepted = accepted;
        if (window.residual(window.size() - 1).norm() > 0.0) {
          residuals.clear();
          for (std::size_t j = 0; j < window.size(); ++j) residuals.push_back(window.residual(j));
          rec.delta = projection_gain(residuals, cfg.lambda);
        }
        if (accepted) {
          x_next = std::move(x_aa);
          if (guard.replace_auxiliary) y_next = std::move(y_aa);
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularSystem) throw;
        builder.trace().aa_fallbacks.push_back(k);
      }
    }

    const double step_norm = (x_next - x).norm();
    x = std::move(x_next);
    y = std::move(y_next);
    eval = evaluate(p.smooth, x);
    if (options.record_iterates) builder.trace().auxiliary_iterates.push_back(y);
    if (builder.push(x, eval, step_norm, rec)) break;
  }
  return builder.finish();
}

}  // namespace

ConvergenceTrace run_aa_aegd_prox(const CompositeProblem& p, const Vector& x0, double eta, const AAConfig& cfg,
                                  const StoppingRule& stop, const TraceOptions& options,
                                  const GuardedAAOptions& guard) {
  return run_guarded(BaseKind::AEGD, p, x0, eta, cfg, stop, options, guard);
}

ConvergenceTrace run_aa_pga(const CompositeProblem& p, const Vector& x0, double eta, const AAConfig& cfg,
                            const StoppingRule& stop, const TraceOptions& options, const GuardedAAOptions& guard) {
  return run_guarded(BaseKind::PGA, p, x0, eta, cfg, stop, options, guard);
}

}  // namespace aaegd
