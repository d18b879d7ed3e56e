// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors

#pragma once

#include <functional>
#include <vector>

#include "semcom/channel.hpp"
#include "semcom/sdp.hpp"

namespace semcom {

/// Received amplitudes as affine functions of the reflection vector phi:
/// h_k^H w_j = a_{k,j}^H phi + b_{k,j}, with a_{k,j} = conj(diag(h_{r,k}^H) G w_j)
/// and b_{k,j} = h_{d,k}^H w_j.
///
/// lifted(k, j) = [[a a^H, a b], [conj(b) a^H, 0]] satisfies
/// [phi; 1]^H lifted(k, j) [phi; 1] + |b|^2 = |h_k^H w_j|^2.
class IrsQuadratics {
 public:
  IrsQuadratics(int users, int elements);

  int users() const noexcept { return users_; }
  int elements() const noexcept { return elements_; }

  const ComplexVector& a(int k, int j) const { return a_[index(k, j)]; }
  cplx b(int k, int j) const { return b_[index(k, j)]; }
  ComplexVector& a(int k, int j) { return a_[index(k, j)]; }
  cplx& b(int k, int j) { return b_[index(k, j)]; }

  ComplexMatrix lifted(int k, int j) const;
  /// |a^H phi + b|^2 for a reflection vector phi (length N).
  double power(int k, int j, const ComplexVector& phi) const;
  /// sum_k R_kk - sum_k sum_{j != k} R_kj: desired minus interference power.
  ComplexMatrix surrogate() const;

 private:
  std::size_t index(int k, int j) const {
    return static_cast<std::size_t>(k) * static_cast<std::size_t>(users_) +
           static_cast<std::size_t>(j);
  }

  int users_;
  int elements_;
  std::vector<ComplexVector> a_;
  std::vector<cplx> b_;
};

IrsQuadratics build_quadratics(const ChannelRealization& cr, const BeamformingMatrix& w);

/// Maximizes tr(surrogate V) subject to V >= 0 and V_nn = 1 for all N + 1
/// diagonal entries; returns the (N+1) x (N+1) solution.
ComplexMatrix solve_irs_sdr(const IrsQuadratics& q, const SdpSettings& settings = {});

enum class RandomizationStrategy { ZeroMean, EigenMean };

struct RandomizationSettings {
  int samples = 100;
  RandomizationStrategy strategy = RandomizationStrategy::EigenMean;

  void validate() const;
};

/// Full objective evaluated at a candidate reflection (lower is better).
using PhaseObjective = std::function<double(const IrsPhase&)>;

struct RandomizeResult {
  IrsPhase phase;
  double objective = 0.0;
  bool improved = false;
  int candidates = 0;
};

/// Maps a lifted vector r to unit-modulus phases theta_n = arg(r_n / r_{N+1}).
IrsPhase phases_from_lifted(const ComplexVector& r);

/// Gaussian randomization around the SDR solution. Candidates are drawn from
/// CN(0, V) (zero-mean) or CN(v, V - v v^H) with v the scaled principal
/// eigenvector (eigen-mean), mapped to phases and scored with `evaluate`.
/// The incumbent is kept unless a candidate is strictly better.
RandomizeResult randomize(const ComplexMatrix& v, const IrsQuadratics& q,
                          const RandomizationSettings& settings, const PhaseObjective& evaluate,
                          const IrsPhase& incumbent, RngStream& stream);

/// theta_n i.i.d. uniform on [0, 2pi), beta_n = 1.
IrsPhase random_phases(int elements, RngStream& stream);

/// Cyclic coordinate descent over a uniform grid of `resolution` angles per
/// element, sweeping until a full pass brings no improvement.
IrsPhase grid_oracle(const IrsQuadratics& q, const PhaseObjective& evaluate, const IrsPhase& start,
                     int resolution);

}  // namespace semcom
