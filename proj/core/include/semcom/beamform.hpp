// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors

#pragma once

#include <optional>
#include <vector>

#include "semcom/channel.hpp"
#include "semcom/sdp.hpp"

namespace semcom {

/// Targets below this are clamped so no link is switched off.
inline constexpr double kMinSinrTarget = 1e-6;

struct SinrTargets {
  Eigen::VectorXd gamma;
};

/// gamma_k = 2^{s_k / (B t_k)} - 1, clamped below at kMinSinrTarget.
SinrTargets targets_from(const std::vector<double>& bits, const std::vector<double>& seconds,
                         double bandwidth_hz);

struct PowerMinSettings {
  SdpSettings sdp;
  /// lambda_2 / lambda_1 above this on any block is reported as a RankOneError.
  double rank_tol = 1e-6;
};

struct PowerMinSolution {
  BeamformingMatrix w;
  double sdp_power = 0.0;  // SDP optimum, watts
  std::vector<double> rank_ratios;
  int sdp_iterations = 0;
};

/// Minimum total power subject to SINR_k >= gamma_k, through the semidefinite
/// relaxation over W_k = w_k w_k^H. Each block is reduced to its principal
/// eigenvector and the powers along those directions are re-solved so every
/// SINR constraint is met with equality.
///
/// Throws InfeasibleError (naming the users carrying the dual certificate) or
/// RankOneError.
PowerMinSolution solve_power_min(const CompositeChannel& cc, const SinrTargets& targets,
                                 const std::vector<double>& noise_w,
                                 const PowerMinSettings& settings = {});

/// Unit-norm directions u_k proportional to (sum_j h_j h_j^H + sigma_k^2 I)^{-1} h_k.
ComplexMatrix mmse_directions(const std::vector<ComplexVector>& h, const std::vector<double>& noise_w);

/// Powers that make every SINR constraint tight for fixed unit directions:
/// (I - D F) p = D sigma^2. Empty when the spectral radius of D F is >= 1 or
/// a power comes out non-positive.
std::optional<Eigen::VectorXd> tight_powers(const std::vector<ComplexVector>& h,
                                            const ComplexMatrix& directions,
                                            const SinrTargets& targets,
                                            const std::vector<double>& noise_w);

/// MMSE directions with tight power allocation, no IRS. Throws InfeasibleError
/// when the targets are out of reach along these directions.
BeamformingMatrix mmse_baseline(const std::vector<ComplexVector>& direct,
                                const SinrTargets& targets, const std::vector<double>& noise_w);

enum class Beamformer { Sdp, Mmse };

struct BackoffResult {
  BeamformingMatrix w;
  double target_scale = 1.0;  // product of the back-off factors applied
  int backoffs = 0;
};

/// Retries with all targets multiplied by `factor` (at most `max_backoffs`
/// times) when they are infeasible. Rethrows the last InfeasibleError.
BackoffResult beamform_with_backoff(Beamformer kind, const CompositeChannel& cc,
                                    const SinrTargets& targets, const std::vector<double>& noise_w,
                                    const PowerMinSettings& settings = {}, double factor = 0.8,
                                    int max_backoffs = 10);

}  // namespace semcom
