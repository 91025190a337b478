#include "aaegd/anderson.hpp"

#include <cmath>
#include <vector>

#include "aaegd/diagnostics.hpp"
#include "aaegd/error.hpp"
#include "driver.hpp"

namespace aaegd {

void AAConfig::validate() const {
  require(m >= 1, ErrorKind::InvalidArgument, "window length m must be at least 1");
  require(q >= 1, ErrorKind::InvalidArgument, "period q must be at least 1");
  require(beta > 0.0 && beta <= 1.0, ErrorKind::InvalidArgument, "relaxation beta must lie in (0, 1]");
  require(lambda >= 0.0 && std::isfinite(lambda), ErrorKind::InvalidArgument, "lambda must be nonnegative");
}

AndersonWindow::AndersonWindow(std::size_t m) : m_(m) {
  require(m >= 1, ErrorKind::InvalidArgument, "window length m must be at least 1");
}

void AndersonWindow::push(Vector x, Vector g) {
  require(x.size() == g.size(), ErrorKind::DimensionMismatch, "window pair has mismatched lengths");
  if (!entries_.empty())
    require(x.size() == entries_.front().x.size(), ErrorKind::DimensionMismatch, "window pair has the wrong length");
  Vector r = g - x;
  entries_.push_back({std::move(x), std::move(g), std::move(r)});
  while (entries_.size() > m_ + 1) entries_.pop_front();
}

MixingCoefficients solve_coefficients(const AndersonWindow& window, double lambda) {
  require(!window.empty(), ErrorKind::InvalidArgument, "cannot mix an empty window");
  const std::size_t len = window.size();
  if (len == 1) return {Vector::Ones(1)};

  const std::size_t newest = len - 1;
  const Vector& rk = window.residual(newest);
  Matrix u(rk.size(), static_cast<Index>(newest));
  for (std::size_t j = 0; j < newest; ++j) u.col(static_cast<Index>(j)) = rk - window.residual(j);

  const Vector w = solve_regularized_ls(u, rk, lambda);
  Vector alpha(static_cast<Index>(len));
  alpha.head(static_cast<Index>(newest)) = w;
  alpha(static_cast<Index>(newest)) = 1.0 - w.sum();
  return {std::move(alpha)};
}

Vector mix(const AndersonWindow& window, const MixingCoefficients& alpha, double beta) {
  require(static_cast<std::size_t>(alpha.alpha.size()) == window.size(), ErrorKind::DimensionMismatch,
          "coefficient count differs from window length");
  require(beta > 0.0 && beta <= 1.0, ErrorKind::InvalidArgument, "relaxation beta must lie in (0, 1]");
  Vector points = Vector::Zero(window.point(0).size());
  Vector outputs = Vector::Zero(points.size());
  for (std::size_t j = 0; j < window.size(); ++j) {
    const double a = alpha.alpha(static_cast<Index>(j));
    points += a * window.point(j);
    outputs += a * window.output(j);
  }
  if (beta == 1.0) return outputs;
  return (1.0 - beta) * points + beta * outputs;
}

namespace {

std::string aa_name(Method method) { return method == Method::GD ? "AA-GD" : "AA-AEGD"; }

}  // namespace

ConvergenceTrace run_aa(Method method, const ObjectiveFunction& f, const Vector& x0, double eta, const AAConfig& cfg,
                        const StoppingRule& stop, const TraceOptions& options) {
  require(eta > 0.0, ErrorKind::InvalidArgument, "step size must be positive");
  require(x0.size() == f.dimension(), ErrorKind::DimensionMismatch, "x0 has the wrong dimension");
  cfg.validate();

  Vector x = x0;
  Evaluation eval = evaluate(f, x);
  detail::TraceBuilder builder(aa_name(method), stop, options, eval.value);

  std::optional<EnergyState> energy;
  IterationRecord first;
  if (method == Method::AEGD) {
    energy = initial_energy(f, x);
    detail::add_energy(first, *energy);
  }
  if (builder.push(x, eval, 0.0, first)) return builder.finish();

  AndersonWindow window(cfg.m);
  std::vector<Vector> residuals;
  for (std::size_t k = 0;; ++k) {
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
    window.push(x, step.x_new);

    Vector next = std::move(step.x_new);
    if (cfg.fires_at(k)) {
      try {
        const MixingCoefficients alpha = solve_coefficients(window, cfg.lambda);
        next = mix(window, alpha, cfg.beta);
        rec.aa_applied = true;
        if (window.residual(window.size() - 1).norm() > 0.0) {
          residuals.clear();
          for (std::size_t j = 0; j < window.size(); ++j) residuals.push_back(window.residual(j));
          rec.delta = projection_gain(residuals, cfg.lambda);
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularSystem) throw;
        builder.trace().aa_fallbacks.push_back(k);
      }
    }

    const double step_norm = (next - x).norm();
    x = std::move(next);
    eval = evaluate(f, x);
    if (builder.push(x, eval, step_norm, rec)) break;
  }
  return builder.finish();
}

double chebyshev_gain(double rho, std::size_t k, std::size_t d) {
  require(rho > 0.0 && rho < 1.0, ErrorKind::InvalidArgument, "rho must lie in (0, 1)");
  if (k >= d) return 0.0;
  const double s = std::sqrt(1.0 - rho);
  const double gamma = (1.0 - s) / (1.0 + s);
  const double gk = std::pow(gamma, static_cast<double>(k));
  return 2.0 * gk / (1.0 + gk * gk);
}

}  // namespace aaegd
