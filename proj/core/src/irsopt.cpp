// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors

#include "semcom/irsopt.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "semcom/errors.hpp"

namespace semcom {

IrsQuadratics::IrsQuadratics(int users, int elements)
    : users_(users),
      elements_(elements),
      a_(static_cast<std::size_t>(users * users), ComplexVector::Zero(elements)),
      b_(static_cast<std::size_t>(users * users), cplx{0.0, 0.0}) {
  if (users < 1 || elements < 1) throw ContractViolation("IrsQuadratics: K and N must be >= 1");
}

ComplexMatrix IrsQuadratics::lifted(int k, int j) const {
  const ComplexVector& av = a(k, j);
  const cplx bv = b(k, j);
  ComplexMatrix r = ComplexMatrix::Zero(elements_ + 1, elements_ + 1);
  r.topLeftCorner(elements_, elements_) = av * av.adjoint();
  r.topRightCorner(elements_, 1) = av * bv;
  r.bottomLeftCorner(1, elements_) = std::conj(bv) * av.adjoint();
  return r;
}

double IrsQuadratics::power(int k, int j, const ComplexVector& phi) const {
  return std::norm(a(k, j).dot(phi) + b(k, j));
}

ComplexMatrix IrsQuadratics::surrogate() const {
  ComplexMatrix c = ComplexMatrix::Zero(elements_ + 1, elements_ + 1);
  for (int k = 0; k < users_; ++k) {
    for (int j = 0; j < users_; ++j) {
      if (j == k) {
        c += lifted(k, j);
      } else {
        c -= lifted(k, j);
      }
    }
  }
  return c;
}

IrsQuadratics build_quadratics(const ChannelRealization& cr, const BeamformingMatrix& w) {
  cr.validate();
  const int k_users = cr.users();
  const int n = cr.irs_elements();
  if (w.cols() != k_users || w.rows() != cr.antennas()) {
    throw ContractViolation("build_quadratics: beamformer shape does not match the channel");
  }
  IrsQuadratics q(k_users, n);
  const ComplexMatrix gw = cr.bs_irs * w;  // N x K
  for (int k = 0; k < k_users; ++k) {
    const auto& hr = cr.reflect[static_cast<std::size_t>(k)];
    const auto& hd = cr.direct[static_cast<std::size_t>(k)];
    for (int j = 0; j < k_users; ++j) {
      q.a(k, j) = (hr.array() * gw.col(j).conjugate().array()).matrix();
      q.b(k, j) = hd.dot(w.col(j));
    }
  }
  return q;
}

ComplexMatrix solve_irs_sdr(const IrsQuadratics& q, const SdpSettings& settings) {
  const int dim = q.elements() + 1;
  ComplexMatrix c = q.surrogate();
  const double cn = c.norm();
  if (cn > 0.0) c /= cn;

  SdpProblem p;
  p.block_dims = {dim};
  p.cost = {HermitianMatrix(-c)};
  for (int n = 0; n < dim; ++n) {
    ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
    e(n, n) = 1.0;
    SdpConstraint con;
    con.sense = ConstraintSense::Equal;
    con.rhs = 1.0;
    con.terms.emplace_back(0, HermitianMatrix(e));
    p.constraints.push_back(std::move(con));
  }
  const SdpSolution sol = solve_sdp(p, settings);
  const bool usable = sol.status == SdpStatus::Optimal ||
                      (sol.status == SdpStatus::MaxIter && sol.primal_residual <= 1e-7 &&
                       sol.dual_residual <= 1e-6);
  if (!usable) {
    throw std::runtime_error(std::string("solve_irs_sdr: SDP failed (") + to_string(sol.status) +
                             ": " + sol.message + ")");
  }
  return sol.primal.front();
}

void RandomizationSettings::validate() const {
  if (samples < 1) throw ContractViolation("RandomizationSettings: samples must be >= 1");
}

IrsPhase phases_from_lifted(const ComplexVector& r) {
  const Eigen::Index n = r.size() - 1;
  const cplx ref = r(n);
  Eigen::VectorXd theta(n);
  for (Eigen::Index i = 0; i < n; ++i) theta(i) = std::arg(r(i) / ref);
  return IrsPhase::unit(theta);
}

namespace {

// Drops negative eigenvalues from numerical noise.
HermitianMatrix psd_floor(const HermitianEig& eig, Eigen::Index first) {
  const Eigen::Index n = eig.values.size();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = first; i < n; ++i) {
    const double l = eig.values(i);
    if (l > 0.0) out.noalias() += l * eig.vectors.col(i) * eig.vectors.col(i).adjoint();
  }
  return HermitianMatrix(out, 1e-9);
}

}  // namespace

RandomizeResult randomize(const ComplexMatrix& v, const IrsQuadratics& q,
                          const RandomizationSettings& settings, const PhaseObjective& evaluate,
                          const IrsPhase& incumbent, RngStream& stream) {
  settings.validate();
  const Eigen::Index dim = q.elements() + 1;
  if (v.rows() != dim || v.cols() != dim) {
    throw ContractViolation("randomize: V must be (N+1) x (N+1)");
  }
  const HermitianEig eig = hermitian_eig(ComplexMatrix(0.5 * (v + v.adjoint())));
  ComplexVector mean = ComplexVector::Zero(dim);
  HermitianMatrix cov;
  if (settings.strategy == RandomizationStrategy::EigenMean) {
    mean = std::sqrt(std::max(eig.values(0), 0.0)) * eig.vectors.col(0);
    cov = psd_floor(eig, 1);
  } else {
    cov = psd_floor(eig, 0);
  }

  std::vector<IrsPhase> candidates;
  candidates.reserve(static_cast<std::size_t>(settings.samples));
  for (int s = 0; s < settings.samples; ++s) {
    const ComplexVector r = sample_cgauss(stream, mean, cov);
    if (!(std::abs(r(dim - 1)) > 0.0)) continue;
    candidates.push_back(phases_from_lifted(r));
  }

  RandomizeResult out;
  out.phase = incumbent;
  out.objective = evaluate(incumbent);
  out.candidates = static_cast<int>(candidates.size());
  for (const auto& c : candidates) {
    const double f = evaluate(c);
    if (f < out.objective) {
      out.objective = f;
      out.phase = c;
      out.improved = true;
    }
  }
  return out;
}

IrsPhase random_phases(int elements, RngStream& stream) {
  if (elements < 1) throw ContractViolation("random_phases: N must be >= 1");
  Eigen::VectorXd theta(elements);
  for (int n = 0; n < elements; ++n) theta(n) = 2.0 * M_PI * stream.uniform();
  return IrsPhase::unit(theta);
}

IrsPhase grid_oracle(const IrsQuadratics& q, const PhaseObjective& evaluate, const IrsPhase& start,
                     int resolution) {
  if (resolution < 8) throw ContractViolation("grid_oracle: resolution must be >= 8");
  if (start.size() != q.elements()) throw ContractViolation("grid_oracle: start has wrong length");
  IrsPhase cur = start;
  double best = evaluate(cur);
  for (int sweep = 0; sweep < 1000; ++sweep) {
    bool improved = false;
    for (int n = 0; n < cur.size(); ++n) {
      const double keep = cur.theta(n);
      double best_theta = keep;
      for (int i = 0; i < resolution; ++i) {
        cur.theta(n) = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(resolution);
        const double f = evaluate(cur);
        if (f < best) {
          best = f;
          best_theta = cur.theta(n);
          improved = true;
        }
      }
      cur.theta(n) = best_theta;
    }
    if (!improved) break;
  }
  return cur;
}

}  // namespace semcom
