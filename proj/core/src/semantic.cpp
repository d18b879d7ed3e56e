// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors

#include "semcom/semantic.hpp"

#include <cmath>

#include "semcom/errors.hpp"
#include "semcom/numerics.hpp"

namespace semcom {

void SemanticParams::validate() const {
  if (!(c > 0.0 && c <= 1.0)) throw ContractViolation("SemanticParams: c must lie in (0, 1]");
  if (!(d > 0.0) || !std::isfinite(d)) throw ContractViolation("SemanticParams: d must be positive");
  if (!(delta < 1.0)) throw ContractViolation("SemanticParams: delta must be < 1");
  if (delta < 1.0 - c - 1e-15) throw ContractViolation("SemanticParams: delta must be >= 1 - c");
}

void ObjectiveWeights::validate() const {
  if (!(q1 > 0.0)) {
    throw ContractViolation("ObjectiveWeights: q1 must be > 0 (the Lambert-W bit allocation divides by q1)");
  }
  if (!(q2 >= 0.0)) throw ContractViolation("ObjectiveWeights: q2 must be >= 0");
  if (!(q3 > 0.0)) throw ContractViolation("ObjectiveWeights: q3 must be > 0");
  if (std::abs(q1 + q2 + q3 - 1.0) > 1e-12) {
    throw ContractViolation("ObjectiveWeights: q1 + q2 + q3 must equal 1");
  }
}

double utility(double bits, const SemanticParams& p) {
  if (bits < 0.0 || std::isnan(bits)) throw DomainError("utility: bit count must be non-negative");
  return 1.0 - p.c * std::exp(-p.d * std::sqrt(bits));
}

double utility_grad(double bits, const SemanticParams& p) {
  if (bits < 0.0 || std::isnan(bits)) throw DomainError("utility_grad: bit count must be non-negative");
  if (bits == 0.0) throw DomainError("utility_grad: derivative is unbounded at s = 0");
  const double r = std::sqrt(bits);
  return 0.5 * p.c * p.d * std::exp(-p.d * r) / r;
}

double min_bits(const SemanticParams& p) {
  if (!(p.delta < 1.0)) throw DomainError("min_bits: utility floor delta >= 1 is unreachable");
  if (p.delta <= 1.0 - p.c) return 0.0;
  const double root = std::log(p.c / (1.0 - p.delta)) / p.d;
  return root * root;
}

SemanticAllocation optimize_bits(double rate_bps, const ObjectiveWeights& w,
                                 const SemanticParams& p) {
  if (!(rate_bps > 0.0) || std::isnan(rate_bps)) {
    throw DomainError("optimize_bits: rate must be positive");
  }
  const double arg = w.q3 * rate_bps * p.c * p.d * p.d / (2.0 * w.q1);
  const double root = lambert_w0(arg) / p.d;
  const double unconstrained = root * root;
  const double floor = min_bits(p);
  if (unconstrained >= floor) return {unconstrained, false};
  return {floor, true};
}

}  // namespace semcom
