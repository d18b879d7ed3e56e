// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors
//
// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>

#include "semcom/altopt.hpp"
#include "semcom/beamform.hpp"
#include "semcom/errors.hpp"
#include "semcom/harness.hpp"
#include "semcom/irsopt.hpp"
#include "semcom/oracles.hpp"
#include "semcom/semantic.hpp"

using namespace semcom;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, double budget_s, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) {
    v.pass = false;
    v.detail += " (over the " + std::to_string(static_cast<int>(budget_s)) + " s budget)";
  }
  failures += v.pass ? 0 : 1;
  std::printf("[%2d] %s %-34s %s [%.2f s]\n", id, v.pass ? "PASS" : "FAIL", name, v.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::vector<ComplexVector> rayleigh(RngStream& s, int m, int k) {
  std::vector<ComplexVector> h(static_cast<std::size_t>(k), ComplexVector(m));
  for (auto& v : h)
    for (int i = 0; i < m; ++i) v(i) = s.cnormal();
  return h;
}

ComplexVector unit_phasors(RngStream& s, int n) {
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v(i) = std::polar(1.0, 2.0 * M_PI * s.uniform());
  return v;
}

Verdict lambert() {
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double z = std::pow(10.0, -6.0 + 12.0 * i / 199.0);
    const double w = lambert_w0(z);
    worst = std::max(worst, std::abs(w * std::exp(w) - z) / std::max(1.0, z));
  }
  return {worst <= 1e-12, fmt("max scaled residual %.2e", worst)};
}

Verdict single_user() {
  RngStream s(101, 0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int m = 1 + i % 6;
    const auto h = rayleigh(s, m, 1);
    const double gamma = 0.1 + 10.0 * s.uniform(), noise = 0.1 + s.uniform();
    const auto sol = solve_power_min(CompositeChannel{h}, {Eigen::VectorXd::Constant(1, gamma)}, {noise});
    const double expect = gamma * noise / h[0].squaredNorm();
    worst = std::max(worst, std::abs(sol.w.squaredNorm() - expect) / expect);
  }
  return {worst <= 1e-6, fmt("50 instances, max rel. error %.2e", worst)};
}

Verdict rank_one() {
  RngStream s(102, 0);
  double worst = 0.0;
  int solved = 0;
  for (int i = 0; i < 100; ++i) {
    const int k = 2 + i % 2;
    const auto h = rayleigh(s, 5, k);
    SinrTargets t{Eigen::VectorXd::NullaryExpr(k, [&](Eigen::Index) { return 0.5 + 2.5 * s.uniform(); })};
    const std::vector<double> noise(static_cast<std::size_t>(k), 1.0);
    PowerMinSettings ps;
    ps.rank_tol = 0.5;  // report the ratio rather than throwing at the threshold
    const auto sol = solve_power_min(CompositeChannel{h}, t, noise, ps);
    for (double r : sol.rank_ratios) worst = std::max(worst, r);
    ++solved;
  }
  return {solved == 100 && worst <= 1e-6,
          fmt("%.0f instances, max lambda2/lambda1 %.2e", solved, worst)};
}

Verdict duality() {
  RngStream s(103, 0);
  double worst = 0.0;
  for (int i = 0; i < 25; ++i) {
    const auto h = rayleigh(s, 3, 2);
    const Eigen::Vector2d gamma(0.3 + 2.0 * s.uniform(), 0.3 + 2.0 * s.uniform());
    const std::vector<double> noise{0.5 + s.uniform(), 0.5 + s.uniform()};
    const double p_sdp = solve_power_min(CompositeChannel{h}, {gamma}, noise).w.squaredNorm();
    const DualityPower d = duality_fixed_point(h, gamma, noise);
    if (!d.converged) return {false, "fixed point did not converge"};
    worst = std::max(worst, std::abs(p_sdp - d.total_power) / d.total_power);
  }
  return {worst <= 1e-5, fmt("25 instances, max rel. gap %.2e", worst)};
}

Verdict semantic_kkt() {
  RngStream s(104, 0);
  double worst_stat = 0.0, worst_floor = 0.0;
  int interior = 0, binding = 0, grid_beaten = 0;
  for (int i = 0; i < 100; ++i) {
    const double r = std::pow(10.0, 3.0 + 4.0 * s.uniform());
    const double c = 0.3 + 0.7 * s.uniform();
    const double d = 0.02 + 0.2 * s.uniform();
    const double delta = (1.0 - c) + (c - 1e-3) * s.uniform();
    const double q1 = 0.05 + 0.5 * s.uniform(), q3 = 0.05 + 0.4 * s.uniform();
    const ObjectiveWeights w{q1, 1.0 - q1 - q3, q3};
    const SemanticParams p{c, d, delta};
    const auto a = optimize_bits(r, w, p);
    if (a.binding) {
      ++binding;
      worst_floor = std::max(worst_floor, std::abs(utility(a.bits, p) - delta));
    } else {
      ++interior;
      worst_stat = std::max(worst_stat, std::abs(q1 / r - q3 * utility_grad(a.bits, p)) / (q1 / r));
    }
    const auto g = [&](double x) { return q1 * x / r - q3 * utility(x, p); };
    const double best = g(a.bits), floor = min_bits(p);
    for (int j = 0; j <= 4000; ++j) {
      const double x = a.bits / 4.0 * std::pow(16.0, j / 4000.0);
      if (x >= floor && g(x) < best - 1e-12 * std::abs(best)) ++grid_beaten;
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%d interior (max residual %.1e), %d binding (max |xi-delta| %.1e), %d grid wins",
                interior, worst_stat, binding, worst_floor, grid_beaten);
  return {worst_stat <= 1e-9 && worst_floor <= 1e-9 && grid_beaten == 0, buf};
}

Verdict descent(const ScenarioConfig& desk) {
  SolverSettings st = desk.solver;
  st.epsilon = 1e-3;
  st.max_iter = 50;
  double worst_rise = 0.0;
  int converged = 0, max_iters = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int k = 2 + static_cast<int>(seed % 3);
    const Scenario sc = make_scenario(desk, k, 20, seed, Algorithm::OptSdp);
    const Outcome o = run(sc, st, algorithm_stream(seed));
    for (std::size_t t = 1; t < o.trace.size(); ++t) {
      worst_rise = std::max(worst_rise, o.trace[t].terms.total - o.trace[t - 1].terms.total);
    }
    converged += o.status == OutcomeStatus::Converged;
    max_iters = std::max(max_iters, o.iterations());
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d/20 converged, max %d iterations, max rise %.1e", converged,
                max_iters, worst_rise);
  return {converged == 20 && max_iters <= 50 && worst_rise <= 1e-9, buf};
}

// Received SNR after optimizing the IRS for one user with a fixed beam.
double doubling_sinr_db(int n, RngStream& s) {
  const int m = 4;
  const ComplexVector a = unit_phasors(s, m), b = unit_phasors(s, n);
  ChannelRealization cr;
  cr.direct = {ComplexVector::Zero(m)};
  cr.reflect = {unit_phasors(s, n)};
  cr.bs_irs = b * a.adjoint();
  const BeamformingMatrix w = a / a.norm();
  const IrsQuadratics q = build_quadratics(cr, w);
  const PhaseObjective f = [&](const IrsPhase& p) { return -q.power(0, 0, p.coefficients()); };
  RngStream draws = s.fork(1);
  const auto r = randomize(solve_irs_sdr(q), q, {}, f, random_phases(n, draws), draws);
  const Eigen::VectorXd sinr = sinr_all(compose(cr, r.phase), w, {1.0});
  return 10.0 * std::log10(sinr(0));
}

Verdict doubling() {
  double worst = 0.0, sum = 0.0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    RngStream s8(105, i), s16(105, 100 + i);
    const double gain = doubling_sinr_db(16, s16) - doubling_sinr_db(8, s8);
    worst = std::max(worst, std::abs(gain - 20.0 * std::log10(2.0)));
    sum += gain;
  }
  return {worst <= 0.1, fmt("mean gain %.4f dB, max deviation from 6.02 dB %.1e", sum / 10, worst)};
}

struct SweepMeans {
  std::map<std::pair<int, std::string>, double> objective, latency, bits, sinr_db;
};

SweepMeans seed_means(const std::vector<ResultRow>& rows, SweepAxis axis) {
  std::map<std::pair<int, std::string>, std::array<double, 5>> acc;
  for (const auto& r : rows) {
    if (r.status != "converged" && r.status != "max-iter") continue;
    auto& a = acc[{axis == SweepAxis::Users ? r.users : r.irs_elements, r.algo}];
    a[0] += r.objective;
    a[1] += r.avg_latency_s;
    a[2] += r.avg_semantic_bits;
    a[3] += r.avg_sinr_db;
    a[4] += 1.0;
  }
  SweepMeans m;
  for (const auto& [key, a] : acc) {
    m.objective[key] = a[0] / a[4];
    m.latency[key] = a[1] / a[4];
    m.bits[key] = a[2] / a[4];
    m.sinr_db[key] = a[3] / a[4];
  }
  return m;
}

std::size_t failed_rows(const std::vector<ResultRow>& rows) {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.status != "converged" && r.status != "max-iter";
  return n;
}

}  // namespace

int main() {
  const ScenarioConfig desk = parse_config(fs::path(SEMCOM_CONFIG_DIR) / "desk.json");
  const SweepSpec k_sweep{SweepAxis::Users, {1, 2, 3, 4}};
  ScenarioConfig desk_k = desk;
  desk_k.irs_elements = 20;
  ScenarioConfig desk_n = desk;
  desk_n.users = 3;
  const SweepSpec n_sweep{SweepAxis::IrsUnits, {20, 30, 40}};

  report(1, "lambert-w residual", 1.0, lambert);
  report(2, "single-user closed form", 30.0, single_user);
  report(3, "rank-one relaxation", 300.0, rank_one);
  report(4, "duality fixed point", 60.0, duality);
  report(5, "semantic kkt", 10.0, semantic_kkt);
  report(6, "monotone descent", 600.0, [&] { return descent(desk); });
  report(7, "irs doubling law", 60.0, doubling);

  std::vector<ResultRow> rows_k, rows_n;
  report(8, "n-sweep sinr gain", 600.0, [&] {
    rows_n = run_sweep(desk_n, n_sweep);
    rows_k = run_sweep(desk_k, k_sweep);
    const auto m = seed_means(rows_n, SweepAxis::IrsUnits);
    const double gain = m.sinr_db.at({40, "opt-sdp"}) - m.sinr_db.at({20, "opt-sdp"});
    return Verdict{gain >= 3.0 && gain <= 8.0 && failed_rows(rows_n) == 0,
                   fmt("opt-sdp N=20->40 gain %.3f dB, %.0f failed trials", gain,
                       static_cast<double>(failed_rows(rows_n)))};
  });

  report(9, "algorithm ordering and k trends", 60.0, [&] {
    std::vector<std::string> bad;
    const auto check_order = [&](const SweepMeans& m, const char* axis, const std::vector<int>& xs) {
      for (int x : xs) {
        for (const auto* metric : {&m.objective, &m.latency}) {
          const double sdp = metric->at({x, "opt-sdp"}), rnd = metric->at({x, "opt-randirs"}),
                       mmse = metric->at({x, "opt-mmse"});
          if (!(sdp <= rnd && rnd <= mmse)) {
            bad.push_back(std::string(axis) + "=" + std::to_string(x) +
                          (metric == &m.objective ? " objective" : " latency"));
          }
        }
      }
    };
    const auto mk = seed_means(rows_k, SweepAxis::Users);
    const auto mn = seed_means(rows_n, SweepAxis::IrsUnits);
    check_order(mk, "K", k_sweep.values);
    check_order(mn, "N", n_sweep.values);
    for (const char* algo : {"opt-sdp", "opt-randirs", "opt-mmse"}) {
      for (std::size_t i = 1; i < k_sweep.values.size(); ++i) {
        const int k0 = k_sweep.values[i - 1], k1 = k_sweep.values[i];
        if (mk.bits.at({k1, algo}) > mk.bits.at({k0, algo})) {
          bad.push_back(std::string(algo) + " bits rise at K=" + std::to_string(k1));
        }
        if (mk.latency.at({k1, algo}) < mk.latency.at({k0, algo})) {
          bad.push_back(std::string(algo) + " latency drops at K=" + std::to_string(k1));
        }
      }
    }
    std::string detail = "7 sweep points, 3 algorithms";
    if (!bad.empty()) {
      detail = "violations:";
      for (const auto& b : bad) detail += " [" + b + "]";
    }
    return Verdict{bad.empty() && failed_rows(rows_k) == 0, detail};
  });

  report(10, "byte-identical rerun", 900.0, [&] {
    const std::string first = to_csv(rows_k) + to_csv(rows_n);
    const std::string again = to_csv(run_sweep(desk_k, k_sweep)) + to_csv(run_sweep(desk_n, n_sweep));
    return Verdict{first == again, fmt("%.0f bytes compared", static_cast<double>(first.size()))};
  });

  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
