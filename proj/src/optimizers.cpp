#include "aaegd/optimizers.hpp"

#include <cmath>

#include "aaegd/error.hpp"
#include "driver.hpp"

namespace aaegd {

std::string_view to_string(Method method) { return method == Method::GD ? "GD" : "AEGD"; }

Evaluation evaluate(const ObjectiveFunction& f, const Vector& x) { return {f.value(x), f.gradient(x)}; }

namespace {

double energy_root(double value, double c) {
  const double shifted = value + c;
  if (!(shifted > 0.0))
    fail(ErrorKind::EnergyDomainViolation, "f(x) + c = " + std::to_string(shifted) + " is not positive");
  return std::sqrt(shifted);
}

}  // namespace

EnergyState initial_energy(const ObjectiveFunction& f, const Vector& x0) {
  const double root = energy_root(f.value(x0), f.shift());
  return {Vector::Constant(x0.size(), root), f.shift()};
}

StepRecord gd_step(const Vector& x, const Evaluation& at_x, double eta) {
  require(eta > 0.0, ErrorKind::InvalidArgument, "step size must be positive");
  detail::check_gradient(at_x.gradient);
  Vector x_new = x - eta * at_x.gradient;
  Vector residual = x_new - x;
  return {std::move(x_new), std::move(residual), std::nullopt};
}

StepRecord gd_step(const ObjectiveFunction& f, const Vector& x, double eta) {
  require(eta > 0.0, ErrorKind::InvalidArgument, "step size must be positive");
  return gd_step(x, Evaluation{0.0, f.gradient(x)}, eta);
}

std::pair<StepRecord, EnergyState> aegd_step(const Vector& x, const Evaluation& at_x, const EnergyState& state,
                                             double eta) {
  require(eta > 0.0, ErrorKind::InvalidArgument, "step size must be positive");
  require(state.r.size() == x.size(), ErrorKind::DimensionMismatch, "energy vector has the wrong dimension");
  // An entry that decayed below the smallest subnormal reads as zero and
  // freezes its coordinate; that is still a valid energy.
  require(state.r.allFinite() && (state.r.array() >= 0.0).all(), ErrorKind::EnergyDomainViolation,
          "energy entries must be finite and nonnegative");
  detail::check_gradient(at_x.gradient);

  const double root = energy_root(at_x.value, state.c);
  const Vector v = at_x.gradient / (2.0 * root);
  EnergyState next{(state.r.array() / (1.0 + 2.0 * eta * v.array().square())).matrix(), state.c};
  Vector x_new = x - 2.0 * eta * next.r.cwiseProduct(v);
  Vector residual = x_new - x;
  Vector step = eta * next.r / root;
  return {StepRecord{std::move(x_new), std::move(residual), std::move(step)}, std::move(next)};
}

std::pair<StepRecord, EnergyState> aegd_step(const ObjectiveFunction& f, const Vector& x, const EnergyState& state,
                                             double eta) {
  return aegd_step(x, evaluate(f, x), state, eta);
}

Vector effective_step(const EnergyState& state_after, const ObjectiveFunction& f, const Vector& x, double eta) {
  const double root = energy_root(f.value(x), state_after.c);
  return eta * state_after.r / root;
}

ConvergenceTrace run_optimizer(Method method, const ObjectiveFunction& f, const Vector& x0, double eta,
                               const StoppingRule& stop, const TraceOptions& options) {
  require(eta > 0.0, ErrorKind::InvalidArgument, "step size must be positive");
  require(x0.size() == f.dimension(), ErrorKind::DimensionMismatch, "x0 has the wrong dimension");

  Vector x = x0;
  Evaluation eval = evaluate(f, x);
  detail::TraceBuilder builder(std::string(to_string(method)), stop, options, eval.value);

  std::optional<EnergyState> energy;
  IterationRecord first;
  if (method == Method::AEGD) {
    energy = initial_energy(f, x);
    detail::add_energy(first, *energy);
  }
  if (builder.push(x, eval, 0.0, first)) return builder.finish();

  while (true) {
    StepRecord step;
    IterationRecord rec;
    if (method == Method::GD) {
      step = gd_step(x, eval, eta);
    } else {
      auto [s, e] = aegd_step(x, eval, *energy, eta);
      step = std::move(s);
      energy = std::move(e);
      detail::add_energy(rec, *energy);
    }
    x = std::move(step.x_new);
    eval = evaluate(f, x);
    if (builder.push(x, eval, step.residual.norm(), rec)) break;
  }
  return builder.finish();
}

}  // namespace aaegd
