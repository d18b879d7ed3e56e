// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors

#pragma once

#include <vector>

#include "semcom/numerics.hpp"

namespace semcom {

/// Columns are the per-user precoders w_k (sqrt-watt).
using BeamformingMatrix = ComplexMatrix;

struct SystemConfig {
  int antennas = 5;        // M
  int users = 2;           // K
  int irs_elements = 20;   // N
  double bandwidth_hz = 1e6;
  std::vector<double> noise_w;  // sigma_k^2, one per user

  void validate() const;
  static SystemConfig uniform(int antennas, int users, int irs_elements, double bandwidth_hz,
                              double noise_w);
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point a, Point b);

struct SystemGeometry {
  Point bs{0.0, 0.0};
  Point irs{50.0, 10.0};
  std::vector<Point> users;

  void validate() const;
};

/// Uniform draws in a disc; user k uses its own child stream so user k's
/// position does not depend on how many users are drawn.
std::vector<Point> draw_user_positions(Point center, double radius, int users,
                                       const RngStream& stream);

/// Power gain C0 * d^-alpha per link. Exponents >= 0 are accepted here (0 gives
/// unit-variance links for testing); configs require >= 2.
struct PathlossModel {
  double c0 = 1e-3;
  double alpha_direct = 5.0;  // heavily obstructed direct link
  double alpha_bs_irs = 2.2;
  double alpha_irs_user = 2.2;

  void validate() const;
  double gain(double distance_m, double alpha) const;
};

/// One fading draw. h^H_{d,k} = direct[k]^H, h^H_{r,k} = reflect[k]^H.
struct ChannelRealization {
  std::vector<ComplexVector> direct;   // K x (M)
  std::vector<ComplexVector> reflect;  // K x (N)
  ComplexMatrix bs_irs;                // G, N x M

  int users() const { return static_cast<int>(direct.size()); }
  int antennas() const { return static_cast<int>(bs_irs.cols()); }
  int irs_elements() const { return static_cast<int>(bs_irs.rows()); }

  void validate() const;
};

/// Reflection coefficients beta_n e^{j theta_n}.
struct IrsPhase {
  Eigen::VectorXd theta;  // [0, 2pi)
  Eigen::VectorXd beta;   // [0, 1]

  static IrsPhase unit(const Eigen::VectorXd& theta);
  /// beta = 0: the surface reflects nothing.
  static IrsPhase off(int elements);

  int size() const { return static_cast<int>(theta.size()); }
  ComplexVector coefficients() const;
  void validate() const;
};

/// Wrap an angle into [0, 2pi).
double wrap_phase(double theta);

struct CompositeChannel {
  std::vector<ComplexVector> h;  // h_k, so the received amplitude is h_k^H w

  int users() const { return static_cast<int>(h.size()); }
};

/// Rayleigh draw scaled by sqrt(pathloss) on each link. Direct link of user k,
/// reflected link of user k and the rows of G come from separate child
/// streams, so smaller systems are prefixes of larger ones for the same stream.
ChannelRealization generate(const SystemConfig& config, const SystemGeometry& geom,
                            const PathlossModel& pl, const RngStream& stream);

/// h_k^H = h_{r,k}^H diag(beta e^{j theta}) G + h_{d,k}^H.
CompositeChannel compose(const ChannelRealization& cr, const IrsPhase& phi);

/// SINR_k = |h_k^H w_k|^2 / (sum_{j != k} |h_k^H w_j|^2 + sigma_k^2).
Eigen::VectorXd sinr_all(const CompositeChannel& cc, const BeamformingMatrix& w,
                         const std::vector<double>& noise_w);

/// Shannon rate B log2(1 + sinr) in bit/s.
double rate(double sinr, double bandwidth_hz);

/// s / R in seconds; +inf when R == 0 and s > 0.
double latency(double bits, double rate_bps);

}  // namespace semcom
