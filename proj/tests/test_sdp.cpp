// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors

#include <sstream>

#include <doctest.h>

#include "semcom/errors.hpp"
#include "semcom/sdp.hpp"

using namespace semcom;

namespace {

HermitianMatrix unit_entry(Eigen::Index n, Eigen::Index i) {
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  m(i, i) = 1.0;
  return HermitianMatrix(m);
}

ComplexMatrix random_hermitian(RngStream& s, int n) {
  ComplexMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = s.cnormal();
  return (a + a.adjoint()) / 2.0;
}

// min <C, X> s.t. X_ii = 1.
SdpProblem diagonal_problem(const ComplexMatrix& c) {
  const Eigen::Index n = c.rows();
  SdpProblem p;
  p.block_dims = {n};
  p.cost = {HermitianMatrix(c)};
  for (Eigen::Index i = 0; i < n; ++i) {
    p.constraints.push_back({{{0, unit_entry(n, i)}}, ConstraintSense::Equal, 1.0});
  }
  return p;
}

double min_eig(const ComplexMatrix& x) { return hermitian_eig(x).values.minCoeff(); }

}  // namespace

TEST_SUITE("sdp") {

TEST_CASE("trace fixed by an equality constraint") {
  SdpProblem p;
  p.block_dims = {2};
  p.cost = {HermitianMatrix::identity(2)};
  p.constraints = {{{{0, HermitianMatrix::identity(2)}}, ConstraintSense::Equal, 1.0}};
  const auto s = solve_sdp(p);
  REQUIRE(s.status == SdpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(s.duality_gap <= 1e-8);
}

TEST_CASE("single inequality on one diagonal entry") {
  SdpProblem p;
  p.block_dims = {2};
  p.cost = {HermitianMatrix::identity(2)};
  p.constraints = {{{{0, unit_entry(2, 0)}}, ConstraintSense::GreaterEqual, 1.0}};
  const auto s = solve_sdp(p);
  REQUIRE(s.status == SdpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(1.0).epsilon(1e-8));
  ComplexMatrix e1 = ComplexMatrix::Zero(2, 2);
  e1(0, 0) = 1.0;
  CHECK((s.primal[0] - e1).norm() < 1e-6);
}

TEST_CASE("minimum eigenvalue through the trace-one spectrahedron") {
  RngStream rng(5, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 5;
    const ComplexMatrix c = random_hermitian(rng, n);
    SdpProblem p;
    p.block_dims = {n};
    p.cost = {HermitianMatrix(c)};
    p.constraints = {{{{0, HermitianMatrix::identity(n)}}, ConstraintSense::Equal, 1.0}};
    const auto s = solve_sdp(p);
    REQUIRE(s.status == SdpStatus::Optimal);
    CHECK(s.objective == doctest::Approx(min_eig(c)).epsilon(1e-7));
  }
}

TEST_CASE("diagonal-constrained problems carry a valid dual certificate") {
  RngStream rng(6, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + trial % 6;
    const ComplexMatrix c = random_hermitian(rng, n);
    const auto p = diagonal_problem(c);
    const auto s = solve_sdp(p);
    REQUIRE(s.status == SdpStatus::Optimal);
    // Z = C - diag(y) must be PSD and b^T y must match the primal objective.
    ComplexMatrix z = c;
    for (int i = 0; i < n; ++i) z(i, i) -= s.dual(i);
    CHECK(min_eig(z) >= -1e-7 * c.norm());
    CHECK(s.dual.sum() == doctest::Approx(s.objective).epsilon(1e-7));
    for (int i = 0; i < n; ++i) CHECK(std::abs(s.primal[0](i, i) - 1.0) <= 2e-7);
    CHECK(min_eig(s.primal[0]) >= -1e-8 * s.primal[0].norm());
  }
}

TEST_CASE("two blocks with a coupling constraint") {
  // min tr X1 + 2 tr X2  s.t. tr X1 + tr X2 >= 3, tr X2 >= 1  ->  2 + 2 = 4
  SdpProblem p;
  p.block_dims = {2, 3};
  p.cost = {HermitianMatrix::identity(2), HermitianMatrix(2.0 * ComplexMatrix::Identity(3, 3))};
  p.constraints = {
      {{{0, HermitianMatrix::identity(2)}, {1, HermitianMatrix::identity(3)}},
       ConstraintSense::GreaterEqual, 3.0},
      {{{1, HermitianMatrix::identity(3)}}, ConstraintSense::GreaterEqual, 1.0},
  };
  const auto s = solve_sdp(p);
  REQUIRE(s.status == SdpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(4.0).epsilon(1e-7));
  CHECK(s.primal[0].trace().real() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(s.primal[1].trace().real() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("constraints hold at optimal solutions") {
  RngStream rng(8, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3;
    SdpProblem p;
    p.block_dims = {n};
    ComplexMatrix c = random_hermitian(rng, n);
    c += (std::abs(min_eig(c)) + 1.0) * ComplexMatrix::Identity(n, n);  // bounded below
    p.cost = {HermitianMatrix(c)};
    for (int k = 0; k < 3; ++k) {
      ComplexVector u(n);
      for (int i = 0; i < n; ++i) u(i) = rng.cnormal();
      p.constraints.push_back({{{0, HermitianMatrix::outer(u)}}, ConstraintSense::GreaterEqual,
                               1.0 + rng.uniform()});
    }
    const auto s = solve_sdp(p);
    REQUIRE(s.status == SdpStatus::Optimal);
    for (const auto& con : p.constraints) {
      const double lhs = inner(con.terms[0].second.matrix(), s.primal[0]);
      CHECK(lhs >= con.rhs - 1e-7 * (1.0 + std::abs(con.rhs)));
    }
    CHECK(min_eig(s.primal[0]) >= -1e-8 * s.primal[0].norm());
  }
}

TEST_CASE("infeasible and unbounded problems are detected") {
  SdpProblem inf;
  inf.block_dims = {2};
  inf.cost = {HermitianMatrix::identity(2)};
  inf.constraints = {{{{0, HermitianMatrix::identity(2)}}, ConstraintSense::Equal, -1.0}};
  const auto si = solve_sdp(inf);
  CHECK(si.status == SdpStatus::Infeasible);
  CHECK_FALSE(si.message.empty());

  SdpProblem unb;
  unb.block_dims = {2};
  unb.cost = {HermitianMatrix(-ComplexMatrix::Identity(2, 2))};
  unb.constraints = {{{{0, unit_entry(2, 0)}}, ConstraintSense::GreaterEqual, 1.0}};
  CHECK(solve_sdp(unb).status == SdpStatus::Unbounded);
}

TEST_CASE("iteration cap reports max-iter") {
  RngStream rng(9, 0);
  const auto p = diagonal_problem(random_hermitian(rng, 6));
  SdpSettings st;
  st.max_iter = 2;
  const auto s = solve_sdp(p, st);
  CHECK(s.status == SdpStatus::MaxIter);
  CHECK(s.iterations == 2);
  CHECK(s.primal.size() == 1);
}

TEST_CASE("weak duality at every feasible interior-point iterate") {
  RngStream rng(10, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = diagonal_problem(random_hermitian(rng, 4 + trial % 4));
    SdpSettings st;
    st.record_log = true;
    const auto s = solve_sdp(p, st);
    REQUIRE(s.status == SdpStatus::Optimal);
    REQUIRE_FALSE(s.log.empty());
    int feasible = 0;
    for (const auto& it : s.log) {
      // An infeasible-start method may report any ordering before it reaches
      // the feasible set; the bound applies once both residuals vanish.
      if (it.primal_residual > 1e-9 || it.dual_residual > 1e-9) continue;
      ++feasible;
      CHECK(it.primal_objective >= it.dual_objective - 1e-9);
    }
    CHECK(feasible > 0);
  }
}

TEST_CASE("objective is stable when the gap tolerance tightens") {
  RngStream rng(11, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = diagonal_problem(random_hermitian(rng, 5));
    SdpSettings loose, tight;
    loose.gap_tol = 1e-6;
    tight.gap_tol = 1e-9;
    const auto a = solve_sdp(p, loose), b = solve_sdp(p, tight);
    REQUIRE(a.status == SdpStatus::Optimal);
    REQUIRE(b.status == SdpStatus::Optimal);
    CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-5));
  }
}

TEST_CASE("problem validation") {
  SdpProblem p;
  p.block_dims = {2};
  p.cost = {HermitianMatrix::identity(2)};
  CHECK_THROWS_AS(p.validate(), ContractViolation);  // no constraints
  p.constraints = {{{{0, HermitianMatrix::identity(3)}}, ConstraintSense::Equal, 1.0}};
  CHECK_THROWS_AS(p.validate(), ContractViolation);  // dim mismatch
  p.constraints = {{{{1, HermitianMatrix::identity(2)}}, ConstraintSense::Equal, 1.0}};
  CHECK_THROWS_AS(p.validate(), ContractViolation);  // block out of range
}

TEST_CASE("realify examples and inner-product identity") {
  ComplexMatrix c(1, 1);
  c(0, 0) = 2.5;
  Eigen::MatrixXd rc(2, 2);
  rc << 2.5, 0, 0, 2.5;
  CHECK((realify(c) - rc).norm() == 0.0);

  ComplexMatrix a(2, 2);
  a << 0, cplx(0, 1), cplx(0, -1), 0;
  const Eigen::MatrixXd ra = realify(a);
  Eigen::MatrixXd expect(4, 4);
  expect << 0, 0, 0, 1, 0, 0, -1, 0, 0, -1, 0, 0, 1, 0, 0, 0;
  CHECK((ra - expect).norm() == 0.0);

  RngStream rng(12, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix x = random_hermitian(rng, 4), y = random_hermitian(rng, 4);
    const double lhs = inner(x, y);
    const double rhs = 0.5 * (realify(x).array() * realify(y).array()).sum();
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
    CHECK((complexify(realify(x)) - x).norm() <= 1e-14 * x.norm());
  }
}

TEST_CASE("realify preserves positive semidefiniteness both ways") {
  RngStream rng(13, 0);
  ComplexMatrix b(4, 2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) b(i, j) = rng.cnormal();
  const ComplexMatrix psd = b * b.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(realify(psd));
  CHECK(es.eigenvalues().minCoeff() >= -1e-12);

  ComplexMatrix ind = psd;
  ind -= 1.0 * ComplexMatrix::Identity(4, 4) * (hermitian_eig(psd).values(0) + 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(realify(ind));
  CHECK(es2.eigenvalues().maxCoeff() < 0.0);
}

TEST_CASE("extract_rank_one") {
  ComplexVector u(3);
  u << cplx(1, 0), cplx(0, 1), cplx(1, -1);
  u /= u.norm();
  const auto r = extract_rank_one(2.0 * u * u.adjoint());
  CHECK(r.is_exact);
  CHECK(r.vector.norm() == doctest::Approx(std::sqrt(2.0)));
  CHECK(std::abs(u.dot(r.vector)) == doctest::Approx(std::sqrt(2.0)));

  const auto id = extract_rank_one(ComplexMatrix::Identity(2, 2));
  CHECK_FALSE(id.is_exact);
  CHECK(id.ratio == doctest::Approx(1.0));
  CHECK(id.vector.norm() == doctest::Approx(1.0));

  const auto z = extract_rank_one(ComplexMatrix::Zero(3, 3));
  CHECK(z.is_exact);
  CHECK(z.vector.norm() == 0.0);
}

TEST_CASE("plain-text dump lists dims and constraints") {
  SdpProblem p;
  p.block_dims = {2};
  p.cost = {HermitianMatrix::identity(2)};
  p.constraints = {{{{0, unit_entry(2, 0)}}, ConstraintSense::GreaterEqual, 1.0}};
  std::ostringstream os;
  write_sdp_text(p, os);
  const std::string text = os.str();
  CHECK(text.rfind("sdp 1 1\nblocks 2\n", 0) == 0);
  CHECK(text.find(">=") != std::string::npos);
}

}  // TEST_SUITE
