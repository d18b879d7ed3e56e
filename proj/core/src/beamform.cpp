// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors

#include "semcom/beamform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "semcom/errors.hpp"

namespace semcom {

SinrTargets targets_from(const std::vector<double>& bits, const std::vector<double>& seconds,
                         double bandwidth_hz) {
  if (bits.size() != seconds.size()) {
    throw ContractViolation("targets_from: bits and latencies differ in length");
  }
  if (!(bandwidth_hz > 0.0)) throw DomainError("targets_from: bandwidth must be positive");
  SinrTargets t;
  t.gamma.resize(static_cast<Eigen::Index>(bits.size()));
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (!(seconds[k] > 0.0)) throw DomainError("targets_from: latency budget must be positive");
    if (bits[k] < 0.0) throw DomainError("targets_from: bit count must be non-negative");
    const double g = std::exp2(bits[k] / (bandwidth_hz * seconds[k])) - 1.0;
    t.gamma(static_cast<Eigen::Index>(k)) = std::max(g, kMinSinrTarget);
  }
  return t;
}

namespace {

void check_targets(const std::vector<ComplexVector>& h, const SinrTargets& targets,
                   const std::vector<double>& noise_w) {
  if (h.empty()) throw ContractViolation("beamforming: no users");
  if (static_cast<std::size_t>(targets.gamma.size()) != h.size() || noise_w.size() != h.size()) {
    throw ContractViolation("beamforming: targets and noise must have one entry per user");
  }
  for (Eigen::Index k = 0; k < targets.gamma.size(); ++k) {
    if (!(targets.gamma(k) > 0.0) || !std::isfinite(targets.gamma(k))) {
      throw DomainError("beamforming: SINR targets must be positive and finite");
    }
  }
  for (const auto& v : h) {
    if (v.size() != h.front().size()) throw ContractViolation("beamforming: antenna count mismatch");
  }
}

std::vector<int> all_users(std::size_t k) {
  std::vector<int> u(k);
  for (std::size_t i = 0; i < k; ++i) u[i] = static_cast<int>(i);
  return u;
}

}  // namespace

ComplexMatrix mmse_directions(const std::vector<ComplexVector>& h,
                              const std::vector<double>& noise_w) {
  const Eigen::Index m = h.front().size();
  const auto k_users = static_cast<Eigen::Index>(h.size());
  ComplexMatrix cov = ComplexMatrix::Zero(m, m);
  for (const auto& v : h) cov.noalias() += v * v.adjoint();
  ComplexMatrix u(m, k_users);
  for (Eigen::Index k = 0; k < k_users; ++k) {
    ComplexMatrix reg = cov;
    reg.diagonal().array() += noise_w[static_cast<std::size_t>(k)];
    ComplexVector d = reg.ldlt().solve(h[static_cast<std::size_t>(k)]);
    const double n = d.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw InfeasibleError("mmse_directions: user has a zero channel", {static_cast<int>(k)});
    }
    u.col(k) = d / n;
  }
  return u;
}

std::optional<Eigen::VectorXd> tight_powers(const std::vector<ComplexVector>& h,
                                            const ComplexMatrix& directions,
                                            const SinrTargets& targets,
                                            const std::vector<double>& noise_w) {
  const auto k_users = static_cast<Eigen::Index>(h.size());
  Eigen::MatrixXd df = Eigen::MatrixXd::Zero(k_users, k_users);
  Eigen::VectorXd rhs(k_users);
  for (Eigen::Index k = 0; k < k_users; ++k) {
    const auto& hk = h[static_cast<std::size_t>(k)];
    const double gain = std::norm(hk.dot(directions.col(k)));
    if (!(gain > 0.0)) return std::nullopt;
    const double dk = targets.gamma(k) / gain;
    for (Eigen::Index j = 0; j < k_users; ++j) {
      if (j != k) df(k, j) = dk * std::norm(hk.dot(directions.col(j)));
    }
    rhs(k) = dk * noise_w[static_cast<std::size_t>(k)];
  }
  if (k_users > 1) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(df, false);
    if (es.eigenvalues().cwiseAbs().maxCoeff() >= 1.0) return std::nullopt;
  }
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(k_users, k_users) - df;
  Eigen::VectorXd p = a.partialPivLu().solve(rhs);
  if (!p.allFinite() || (p.array() <= 0.0).any()) return std::nullopt;
  return p;
}

PowerMinSolution solve_power_min(const CompositeChannel& cc, const SinrTargets& targets,
                                 const std::vector<double>& noise_w,
                                 const PowerMinSettings& settings) {
  check_targets(cc.h, targets, noise_w);
  const auto k_users = cc.h.size();
  const Eigen::Index m = cc.h.front().size();

  // Work in noise-normalized channels and in units of the single-user power
  // bound sum_k gamma_k sigma_k^2 / ||h_k||^2, so the SDP data are O(1).
  std::vector<ComplexVector> u(k_users);
  std::vector<double> gain(k_users);
  double unit = 0.0;
  for (std::size_t k = 0; k < k_users; ++k) {
    const double n2 = cc.h[k].squaredNorm();
    if (!(n2 > 0.0)) {
      throw InfeasibleError("solve_power_min: user " + std::to_string(k) + " has a zero channel",
                            {static_cast<int>(k)});
    }
    u[k] = cc.h[k] / std::sqrt(n2);
    gain[k] = n2 / noise_w[k];
    unit += targets.gamma(static_cast<Eigen::Index>(k)) / gain[k];
  }

  SdpProblem p;
  p.block_dims.assign(k_users, m);
  p.cost.assign(k_users, HermitianMatrix::identity(m));
  for (std::size_t k = 0; k < k_users; ++k) {
    const double g = targets.gamma(static_cast<Eigen::Index>(k));
    const HermitianMatrix t = HermitianMatrix::outer(u[k]);
    const HermitianMatrix t_int(-g * t.matrix());
    SdpConstraint c;
    c.sense = ConstraintSense::GreaterEqual;
    c.rhs = g / (gain[k] * unit);
    for (std::size_t j = 0; j < k_users; ++j) c.terms.emplace_back(j, j == k ? t : t_int);
    p.constraints.push_back(std::move(c));
  }

  const SdpSolution sol = solve_sdp(p, settings.sdp);
  const bool usable = sol.status == SdpStatus::Optimal ||
                      (sol.status == SdpStatus::MaxIter && sol.primal_residual <= 1e-7 &&
                       sol.dual_residual <= 1e-7 && sol.duality_gap <= 1e-6);
  if (!usable) {
    std::vector<int> implicated;
    const double ymax = sol.dual.size() ? sol.dual.cwiseAbs().maxCoeff() : 0.0;
    for (Eigen::Index k = 0; k < sol.dual.size(); ++k) {
      if (ymax > 0.0 && sol.dual(k) > 1e-6 * ymax) implicated.push_back(static_cast<int>(k));
    }
    if (implicated.empty()) implicated = all_users(k_users);
    std::ostringstream os;
    os << "solve_power_min: SINR targets infeasible (" << to_string(sol.status) << ": "
       << sol.message << "); users";
    for (int k : implicated) os << ' ' << k;
    throw InfeasibleError(os.str(), implicated);
  }

  PowerMinSolution out;
  out.sdp_power = sol.objective * unit;
  out.sdp_iterations = sol.iterations;
  ComplexMatrix dirs(m, static_cast<Eigen::Index>(k_users));
  BeamformingMatrix raw(m, static_cast<Eigen::Index>(k_users));
  for (std::size_t k = 0; k < k_users; ++k) {
    const RankOne r1 = extract_rank_one(sol.primal[k], settings.rank_tol);
    out.rank_ratios.push_back(r1.ratio);
    if (!r1.is_exact) {
      std::ostringstream os;
      os << "solve_power_min: block " << k << " is not rank one (lambda2/lambda1 = " << r1.ratio
         << ")";
      throw RankOneError(os.str(), static_cast<int>(k), r1.ratio);
    }
    const double n = r1.vector.norm();
    if (!(n > 0.0)) {
      throw InfeasibleError("solve_power_min: empty beam for user " + std::to_string(k),
                            {static_cast<int>(k)});
    }
    raw.col(static_cast<Eigen::Index>(k)) = r1.vector * std::sqrt(unit);
    dirs.col(static_cast<Eigen::Index>(k)) = r1.vector / n;
  }
  const auto p_tight = tight_powers(cc.h, dirs, targets, noise_w);
  if (p_tight) {
    out.w.resize(m, static_cast<Eigen::Index>(k_users));
    for (std::size_t k = 0; k < k_users; ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      out.w.col(kk) = std::sqrt((*p_tight)(kk)) * dirs.col(kk);
    }
  } else {
    out.w = raw;
  }
  return out;
}

BeamformingMatrix mmse_baseline(const std::vector<ComplexVector>& direct,
                                const SinrTargets& targets, const std::vector<double>& noise_w) {
  check_targets(direct, targets, noise_w);
  for (std::size_t k = 0; k < direct.size(); ++k) {
    if (!(direct[k].squaredNorm() > 0.0)) {
      throw InfeasibleError("mmse_baseline: user " + std::to_string(k) + " has a zero channel",
                            {static_cast<int>(k)});
    }
  }
  const ComplexMatrix u = mmse_directions(direct, noise_w);
  const auto p = tight_powers(direct, u, targets, noise_w);
  if (!p) {
    throw InfeasibleError("mmse_baseline: SINR targets unreachable along MMSE directions",
                          all_users(direct.size()));
  }
  BeamformingMatrix w(u.rows(), u.cols());
  for (Eigen::Index k = 0; k < u.cols(); ++k) w.col(k) = std::sqrt((*p)(k)) * u.col(k);
  return w;
}

BackoffResult beamform_with_backoff(Beamformer kind, const CompositeChannel& cc,
                                    const SinrTargets& targets, const std::vector<double>& noise_w,
                                    const PowerMinSettings& settings, double factor,
                                    int max_backoffs) {
  SinrTargets t = targets;
  BackoffResult out;
  for (int attempt = 0;; ++attempt) {
    try {
      out.w = kind == Beamformer::Sdp ? solve_power_min(cc, t, noise_w, settings).w
                                      : mmse_baseline(cc.h, t, noise_w);
      out.backoffs = attempt;
      return out;
    } catch (const InfeasibleError&) {
      if (attempt >= max_backoffs) throw;
      t.gamma = (t.gamma * factor).cwiseMax(kMinSinrTarget);
      out.target_scale *= factor;
    }
  }
}

}  // namespace semcom
