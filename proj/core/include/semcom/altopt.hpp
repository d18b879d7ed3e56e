// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "semcom/beamform.hpp"
#include "semcom/channel.hpp"
#include "semcom/irsopt.hpp"
#include "semcom/semantic.hpp"

namespace semcom {

/// Opt-SDP optimizes W, s and the IRS; Opt-RandIRS keeps the initial random
/// IRS; Opt-MMSE has no IRS (zero reflection) and MMSE beam directions.
enum class Algorithm { OptSdp, OptRandIrs, OptMmse };

std::string_view to_string(Algorithm a);
/// Accepts "opt-sdp", "opt-randirs", "opt-mmse". Throws ContractViolation otherwise.
Algorithm algorithm_from_string(std::string_view s);

struct ObjectiveTerms {
  double latency_s = 0.0;  // sum_k s_k / R_k
  double power_w = 0.0;    // sum_k ||w_k||^2
  double utility = 0.0;    // sum_k xi(s_k)
  double total = 0.0;      // q1 latency + q2 power - q3 utility
};

/// Weighted objective at (W, s, phi). Throws InfeasibleLinkError when some
/// R_k = 0 with s_k > 0 and ContractViolation when a utility floor is broken
/// by more than 1e-9; both name the users involved.
ObjectiveTerms objective(const ChannelRealization& cr, const BeamformingMatrix& w,
                         const std::vector<double>& bits, const IrsPhase& phi,
                         const ObjectiveWeights& weights, const std::vector<SemanticParams>& params,
                         double bandwidth_hz, const std::vector<double>& noise_w);

struct Scenario {
  SystemConfig system;
  ChannelRealization channel;
  std::vector<SemanticParams> semantic;  // one per user
  ObjectiveWeights weights;
  Algorithm algorithm = Algorithm::OptSdp;

  void validate() const;
};

struct SolverSettings {
  double epsilon = 1e-3;
  int max_iter = 50;
  SdpSettings sdp;
  RandomizationSettings randomization;
  double rank_tol = 1e-6;
  /// s_k^(0) = max(min_bits, initial_bits)
  double initial_bits = 1000.0;
  /// W^(0): MMSE directions with this total power split evenly across users.
  double initial_power_w = 1.0;

  void validate() const;
};

struct IterationRecord {
  int iteration = 0;
  ObjectiveTerms terms;
  /// (F^(t-1) - F^(t)) / F^(t-1); +inf for the initial point.
  double change_rate = 0.0;
  bool beam_accepted = false;
  int backoffs = 0;
  bool irs_improved = false;
};

enum class OutcomeStatus { Converged, MaxIter, Infeasible };

std::string_view to_string(OutcomeStatus s);

struct Outcome {
  BeamformingMatrix w;
  std::vector<double> bits;
  IrsPhase phase;
  Eigen::VectorXd sinr;
  std::vector<IterationRecord> trace;
  OutcomeStatus status = OutcomeStatus::MaxIter;
  std::string message;

  int iterations() const { return trace.empty() ? 0 : static_cast<int>(trace.size()) - 1; }
};

/// Relative change with the denominator guarded for non-positive F^(t-1).
double change_rate(double previous, double current);

/// Alternating optimization: beamforming (SINR targets held at the current
/// latency), Lambert-W bit allocation, then the gated IRS update, until the
/// relative objective change drops to epsilon.
///
/// `stream` determines the initial random IRS and the randomization draws;
/// Opt-SDP and Opt-RandIRS given the same stream start from the same IRS.
Outcome run(const Scenario& scenario, const SolverSettings& settings, const RngStream& stream);

}  // namespace semcom
