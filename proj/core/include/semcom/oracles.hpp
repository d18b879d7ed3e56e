// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors

#pragma once

#include <vector>

#include "semcom/numerics.hpp"

namespace semcom {

struct DualityPower {
  Eigen::VectorXd uplink;    // virtual uplink powers q_k
  Eigen::VectorXd downlink;  // downlink powers along the uplink MMSE receivers
  ComplexMatrix directions;  // unit receive/transmit directions
  double total_power = 0.0;  // sum of downlink powers
  int iterations = 0;
  bool converged = false;
};

/// Downlink power minimization through uplink-downlink duality.
///
/// Iterates q_k <- gamma_k / (h_k^H (I + sum_{j != k} q_j h_j h_j^H)^{-1} h_k)
/// from q = 0, then solves the downlink powers that make every SINR tight
/// along the resulting MMSE directions. Uses no semidefinite programming, so it
/// serves as an independent check on the SDP beamformer.
DualityPower duality_fixed_point(const std::vector<ComplexVector>& h, const Eigen::VectorXd& gamma,
                                 const std::vector<double>& noise_w, double tol = 1e-14,
                                 int max_iter = 100000);

}  // namespace semcom
