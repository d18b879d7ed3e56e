// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors

#include "semcom/oracles.hpp"

#include <cmath>

#include "semcom/errors.hpp"

namespace semcom {

DualityPower duality_fixed_point(const std::vector<ComplexVector>& h, const Eigen::VectorXd& gamma,
                                 const std::vector<double>& noise_w, double tol, int max_iter) {
  const auto k_users = static_cast<Eigen::Index>(h.size());
  if (k_users == 0 || gamma.size() != k_users || static_cast<Eigen::Index>(noise_w.size()) != k_users) {
    throw ContractViolation("duality_fixed_point: inconsistent sizes");
  }
  const Eigen::Index m = h.front().size();

  // Uplink noise is 1 and downlink noise enters only the objective, so scale
  // channels by the noise to keep q_k sigma_k^2 well conditioned.
  std::vector<ComplexVector> g(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) g[k] = h[k] / std::sqrt(noise_w[k]);

  DualityPower out;
  Eigen::VectorXd q = Eigen::VectorXd::Zero(k_users);
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd next(k_users);
    for (Eigen::Index k = 0; k < k_users; ++k) {
      ComplexMatrix s = ComplexMatrix::Identity(m, m);
      for (Eigen::Index j = 0; j < k_users; ++j) {
        if (j != k) s.noalias() += q(j) * g[static_cast<std::size_t>(j)] * g[static_cast<std::size_t>(j)].adjoint();
      }
      const auto& gk = g[static_cast<std::size_t>(k)];
      const ComplexVector x = s.ldlt().solve(gk);
      next(k) = gamma(k) / gk.dot(x).real();
    }
    const double change = (next - q).norm() / std::max(next.norm(), 1e-300);
    q = next;
    out.iterations = it;
    if (change <= tol) {
      out.converged = true;
      break;
    }
  }
  out.uplink = q;

  out.directions.resize(m, k_users);
  for (Eigen::Index k = 0; k < k_users; ++k) {
    ComplexMatrix s = ComplexMatrix::Identity(m, m);
    for (Eigen::Index j = 0; j < k_users; ++j) {
      if (j != k) s.noalias() += q(j) * g[static_cast<std::size_t>(j)] * g[static_cast<std::size_t>(j)].adjoint();
    }
    ComplexVector u = s.ldlt().solve(g[static_cast<std::size_t>(k)]);
    out.directions.col(k) = u / u.norm();
  }

  // Tight downlink powers: p_k |h_k^H u_k|^2 = gamma_k (sum_j p_j |h_k^H u_j|^2 + sigma_k^2).
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k_users, k_users);
  Eigen::VectorXd rhs(k_users);
  for (Eigen::Index k = 0; k < k_users; ++k) {
    const auto& hk = h[static_cast<std::size_t>(k)];
    for (Eigen::Index j = 0; j < k_users; ++j) {
      const double c = std::norm(hk.dot(out.directions.col(j)));
      a(k, j) = j == k ? c : -gamma(k) * c;
    }
    rhs(k) = gamma(k) * noise_w[static_cast<std::size_t>(k)];
  }
  out.downlink = a.fullPivLu().solve(rhs);
  out.total_power = out.downlink.sum();
  return out;
}

}  // namespace semcom
