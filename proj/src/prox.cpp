#include "aaegd/prox.hpp"

#include "aaegd/error.hpp"

namespace aaegd {

Vector prox_box_linf(const Vector& y, double radius) {
  require(radius > 0.0, ErrorKind::InvalidArgument, "box radius must be positive");
  return y.cwiseMax(-radius).cwiseMin(radius);
}

Vector prox_nonneg(const Vector& y) { return y.cwiseMax(0.0); }

ProxOperator identity_prox() {
  return {"none", [](const Vector& y, double) { return y; }, [](const Vector&) { return true; }};
}

ProxOperator box_linf_prox(double radius) {
  require(radius > 0.0, ErrorKind::InvalidArgument, "box radius must be positive");
  return {"box_linf", [radius](const Vector& y, double) { return prox_box_linf(y, radius); },
          [radius](const Vector& x) { return x.cwiseAbs().maxCoeff() <= radius; }};
}

ProxOperator nonneg_prox() {
  return {"nonneg", [](const Vector& y, double) { return prox_nonneg(y); },
          [](const Vector& x) { return x.minCoeff() >= 0.0; }};
}

}  // namespace aaegd
