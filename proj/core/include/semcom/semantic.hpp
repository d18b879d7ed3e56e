// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors

#pragma once

namespace semcom {

/// Utility xi(s) = 1 - c e^{-d sqrt(s)} with a floor xi(s) >= delta.
struct SemanticParams {
  double c = 1.0;
  double d = 0.1;
  double delta = 0.9;

  /// c in (0, 1], d > 0, delta in [1 - c, 1).
  void validate() const;
};

/// Weights of latency, power and utility in the objective.
struct ObjectiveWeights {
  double q1 = 0.3;
  double q2 = 0.3;
  double q3 = 0.4;

  /// q1 > 0, q2 >= 0, q3 > 0, q1 + q2 + q3 = 1 within 1e-12.
  void validate() const;
};

struct SemanticAllocation {
  double bits = 0.0;
  /// true when the utility floor is active (s* = min_bits).
  bool binding = false;
};

double utility(double bits, const SemanticParams& p);

/// d xi / d s = c d e^{-d sqrt(s)} / (2 sqrt(s)); undefined at s = 0.
double utility_grad(double bits, const SemanticParams& p);

/// Smallest s with xi(s) >= delta: (ln(c / (1 - delta)) / d)^2, or 0 when
/// the floor holds at s = 0.
double min_bits(const SemanticParams& p);

/// Minimizer of q1 s / R - q3 xi(s) subject to xi(s) >= delta.
///
/// The unconstrained stationary point is s = (W0(q3 R c d^2 / (2 q1)) / d)^2.
/// Because xi is strictly increasing the floor is handled by clamping to
/// min_bits, which is where the multiplier of the floor becomes positive.
/// q2 never enters: the power term does not depend on s.
SemanticAllocation optimize_bits(double rate_bps, const ObjectiveWeights& w,
                                 const SemanticParams& p);

}  // namespace semcom
