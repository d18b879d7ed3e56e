// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors

#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "semcom/numerics.hpp"

namespace semcom {

enum class ConstraintSense { GreaterEqual, Equal };

/// sum_b <A_b, X_b> (>= | =) rhs, where <A, X> = Re tr(A^H X).
/// Blocks not listed in `terms` have a zero coefficient.
struct SdpConstraint {
  std::vector<std::pair<std::size_t, HermitianMatrix>> terms;
  ConstraintSense sense = ConstraintSense::GreaterEqual;
  double rhs = 0.0;
};

/// minimize sum_b <C_b, X_b> subject to the constraints and X_b >= 0.
struct SdpProblem {
  std::vector<Eigen::Index> block_dims;
  std::vector<HermitianMatrix> cost;
  std::vector<SdpConstraint> constraints;

  /// Throws ContractViolation on shape mismatch or an empty constraint list.
  void validate() const;
};

enum class SdpStatus { Optimal, Infeasible, Unbounded, MaxIter };

const char* to_string(SdpStatus s);

struct SdpSettings {
  double gap_tol = 1e-8;
  double feas_tol = 1e-9;
  int max_iter = 100;
  double step_fraction = 0.98;
  /// Certificate magnitude beyond which infeasibility/unboundedness is declared.
  double divergence_threshold = 1e8;
  bool record_log = false;
};

struct SdpIterate {
  int iter = 0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_residual = 0.0;  // ||b - A(X)|| / (1 + ||b||)
  double dual_residual = 0.0;    // ||C - A^T y - Z|| / (1 + ||C||)
  double mu = 0.0;
};

struct SdpSolution {
  std::vector<ComplexMatrix> primal;
  Eigen::VectorXd dual;
  double objective = 0.0;
  double dual_objective = 0.0;
  double duality_gap = 0.0;  // relative
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  SdpStatus status = SdpStatus::MaxIter;
  int iterations = 0;
  std::string message;
  std::vector<SdpIterate> log;
};

/// Primal-dual path-following interior point (HKM direction, Mehrotra
/// predictor-corrector) on the realified problem. Inequalities become
/// equalities with nonnegative slacks.
SdpSolution solve_sdp(const SdpProblem& p, const SdpSettings& settings = {});

/// Real symmetric embedding [[Re A, Im A], [-Im A, Re A]].
/// Satisfies <A, X> = 1/2 <realify(A), realify(X)>.
Eigen::MatrixXd realify(const ComplexMatrix& a);

/// Inverse of realify; averages the redundant blocks.
ComplexMatrix complexify(const Eigen::MatrixXd& r);

struct RankOne {
  ComplexVector vector;  // sqrt(lambda_1) v_1
  bool is_exact = true;  // lambda_2 / lambda_1 <= tol
  double ratio = 0.0;    // lambda_2 / lambda_1
};

RankOne extract_rank_one(const ComplexMatrix& x, double tol = 1e-6);

/// Plain-text dump: block dims, cost and constraint matrices row-major.
void write_sdp_text(const SdpProblem& p, std::ostream& os);

}  // namespace semcom
