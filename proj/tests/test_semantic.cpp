// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors

#include <cmath>

#include <doctest.h>

#include "semcom/errors.hpp"
#include "semcom/numerics.hpp"
#include "semcom/semantic.hpp"

using namespace semcom;

namespace {

// Root of q1/R = q3 xi'(s) by bisection on s; xi' is strictly decreasing.
double stationary_bisect(double rate, double q1, double q3, const SemanticParams& p) {
  double lo = 1e-12, hi = 1.0;
  const auto g = [&](double s) { return q3 * utility_grad(s, p) - q1 / rate; };
  while (g(hi) > 0) hi *= 2.0;
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Smallest s with utility(s) >= delta by bisection.
double floor_bisect(const SemanticParams& p) {
  double lo = 0.0, hi = 1.0;
  while (utility(hi, p) < p.delta) hi *= 2.0;
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    (utility(mid, p) < p.delta ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace

TEST_SUITE("semantic") {

TEST_CASE("utility examples") {
  SemanticParams p{1.0, 0.1, 0.0};
  CHECK(utility(0.0, p) == 0.0);
  CHECK(utility(400.0, p) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-14));
  CHECK(utility(400.0, p) == doctest::Approx(0.864665).epsilon(1e-6));
  CHECK(std::abs(utility(1e12, p) - 1.0) <= 1e-6);
  CHECK_THROWS_AS(utility(-1.0, p), DomainError);
}

TEST_CASE("utility_grad examples and finite differences") {
  SemanticParams p{1.0, 0.1, 0.0};
  CHECK(utility_grad(400.0, p) == doctest::Approx(0.5 * 0.1 * std::exp(-2.0) / 20.0).epsilon(1e-14));
  CHECK(utility_grad(400.0, p) == doctest::Approx(3.3834e-4).epsilon(1e-4));
  CHECK_THROWS_AS(utility_grad(0.0, p), DomainError);

  SemanticParams p2 = p;
  p2.c = 0.5;
  SemanticParams p1 = p;
  p1.c = 0.25;
  CHECK(utility_grad(123.0, p2) == doctest::Approx(2.0 * utility_grad(123.0, p1)).epsilon(1e-14));

  double prev = INFINITY;
  for (int i = 0; i <= 60; ++i) {
    const double s = std::pow(10.0, 6.0 * i / 60.0);
    const double h = 1e-5 * s;
    const double fd = (utility(s + h, p) - utility(s - h, p)) / (2 * h);
    CHECK(utility_grad(s, p) == doctest::Approx(fd).epsilon(1e-6));
    CHECK(utility_grad(s, p) < prev);
    prev = utility_grad(s, p);
  }
}

TEST_CASE("min_bits examples and bisection agreement") {
  CHECK(min_bits({0.8, 0.1, 0.2}) == 0.0);
  const SemanticParams p{1.0, 0.1, 0.9};
  CHECK(min_bits(p) == doctest::Approx(std::pow(std::log(10.0) / 0.1, 2)).epsilon(1e-14));
  CHECK(min_bits(p) == doctest::Approx(530.19).epsilon(1e-5));
  CHECK(min_bits(p) == doctest::Approx(floor_bisect(p)).epsilon(1e-12));
  CHECK(std::abs(utility(min_bits(p), p) - p.delta) <= 1e-9);
  CHECK_THROWS_AS(min_bits({1.0, 0.1, 1.0}), DomainError);
}

TEST_CASE("parameter and weight validation") {
  CHECK_THROWS_AS((SemanticParams{0.0, 0.1, 0.9}.validate()), ContractViolation);
  CHECK_THROWS_AS((SemanticParams{1.0, 0.0, 0.9}.validate()), ContractViolation);
  CHECK_THROWS_AS((SemanticParams{0.5, 0.1, 0.2}.validate()), ContractViolation);
  CHECK_THROWS_AS((SemanticParams{1.0, 0.1, 1.0}.validate()), ContractViolation);
  CHECK_NOTHROW((ObjectiveWeights{0.3, 0.3, 0.4}.validate()));
  CHECK_THROWS_AS((ObjectiveWeights{0.3, 0.2, 0.4}.validate()), ContractViolation);
  try {
    ObjectiveWeights{0.0, 0.6, 0.4}.validate();
    FAIL("q1 = 0 accepted");
  } catch (const ContractViolation& e) {
    CHECK(std::string(e.what()).find("Lambert-W") != std::string::npos);
  }
}

TEST_CASE("optimize_bits interior example against bisection") {
  const ObjectiveWeights w{0.3, 0.3, 0.4};
  const SemanticParams p{1.0, 0.1, 0.0};
  const auto a = optimize_bits(1e5, w, p);
  CHECK_FALSE(a.binding);
  CHECK(lambert_w0(0.4 * 1e5 * 0.01 / 0.6) == doctest::Approx(4.911).epsilon(1e-3));
  CHECK(a.bits == doctest::Approx(2412).epsilon(1e-3));
  CHECK(a.bits == doctest::Approx(stationary_bisect(1e5, 0.3, 0.4, p)).epsilon(1e-10));
}

TEST_CASE("optimize_bits binding example") {
  const ObjectiveWeights w{0.3, 0.3, 0.4};
  const SemanticParams p{1.0, 0.1, 0.9999};
  const auto a = optimize_bits(1e5, w, p);
  CHECK(a.binding);
  CHECK(a.bits == doctest::Approx(std::pow(std::log(1e4) / 0.1, 2)).epsilon(1e-12));
  CHECK(a.bits == doctest::Approx(8483.0).epsilon(1e-3));
  CHECK(std::abs(utility(a.bits, p) - p.delta) <= 1e-9);
  CHECK_THROWS_AS(optimize_bits(0.0, w, p), DomainError);
}

TEST_CASE("optimize_bits comparative statics and invariances") {
  const SemanticParams p{1.0, 0.1, 0.9};
  double prev = 0.0;
  for (double q3 : {0.1, 0.2, 0.3, 0.5, 0.6}) {
    const double s = optimize_bits(2e5, {0.3, 0.7 - q3, q3}, p).bits;
    CHECK(s >= prev);
    prev = s;
  }
  const double base = optimize_bits(3e5, {0.3, 0.3, 0.4}, p).bits;
  CHECK(optimize_bits(3e5, {0.6, 0.3, 0.8}, p).bits == doctest::Approx(base).epsilon(1e-14));
  CHECK(optimize_bits(3e5, {0.3, 0.0, 0.4}, p).bits == base);
  CHECK(optimize_bits(3e5, {0.3, 5.0, 0.4}, p).bits == base);
}

TEST_CASE("KKT residuals and stationarity identity over random tuples") {
  RngStream s(31, 0);
  int interior = 0, binding = 0;
  for (int i = 0; i < 200; ++i) {
    const double rate = std::pow(10.0, 3.0 + 4.0 * s.uniform());
    const double c = 0.2 + 0.8 * s.uniform();
    const double d = 0.01 + 0.3 * s.uniform();
    const double delta = (1.0 - c) + (c - 1e-3) * s.uniform();
    const double q1 = 0.05 + 0.5 * s.uniform();
    const double q3 = 0.05 + 0.4 * s.uniform();
    const ObjectiveWeights w{q1, 1.0 - q1 - q3, q3};
    const SemanticParams p{c, d, delta};
    const auto a = optimize_bits(rate, w, p);
    if (a.binding) {
      ++binding;
      CHECK(std::abs(utility(a.bits, p) - delta) <= 1e-9);
      // Non-negative multiplier: the unconstrained objective is already rising at the floor.
      CHECK(q1 / rate - q3 * utility_grad(a.bits, p) >= 0.0);
    } else {
      ++interior;
      CHECK(std::abs(q1 / rate - q3 * utility_grad(a.bits, p)) <= 1e-9 * (q1 / rate));
      const double r = std::sqrt(a.bits);
      const double lhs = std::exp(-d * r) / (d * r);
      CHECK(lhs == doctest::Approx(2 * q1 / (q3 * rate * c * d * d)).epsilon(1e-9));
    }
  }
  CHECK(interior > 0);
  CHECK(binding > 0);
}

TEST_CASE("grid search around s* finds nothing better") {
  RngStream s(32, 0);
  for (int i = 0; i < 20; ++i) {
    const double rate = std::pow(10.0, 4.0 + 3.0 * s.uniform());
    const ObjectiveWeights w{0.3, 0.3, 0.4};
    const SemanticParams p{1.0, 0.05 + 0.1 * s.uniform(), 0.9};
    const double star = optimize_bits(rate, w, p).bits;
    const double floor = min_bits(p);
    const auto g = [&](double x) { return w.q1 * x / rate - w.q3 * utility(x, p); };
    const double best = g(star);
    for (double x = star / 4; x <= 4 * star; x += 1e-3 * star) {
      if (x < floor) continue;
      CHECK(g(x) >= best - 1e-12 * std::abs(best));
    }
  }
}

}  // TEST_SUITE
