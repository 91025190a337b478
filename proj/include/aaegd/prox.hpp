#pragma once

#include <functional>
#include <string>

#include "aaegd/linalg.hpp"

namespace aaegd {

Vector prox_box_linf(const Vector& y, double radius);
Vector prox_nonneg(const Vector& y);

/// Proximal map of a convex term h: y -> argmin_x h(x) + ||x - y||^2 / (2 eta).
///
/// Every operator shipped here is the prox of an indicator (or of h = 0), so
/// evaluate() ignores eta and is a Euclidean projection. is_feasible()
/// reports exact membership in the constraint set.
struct ProxOperator {
  std::string name;
  std::function<Vector(const Vector& y, double eta)> evaluate;
  std::function<bool(const Vector& x)> is_feasible;

  Vector operator()(const Vector& y, double eta) const { return evaluate(y, eta); }
};

ProxOperator identity_prox();
ProxOperator box_linf_prox(double radius);
ProxOperator nonneg_prox();

}  // namespace aaegd
