// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "semcom/errors.hpp"
#include "semcom/harness.hpp"

namespace semcom {

namespace {

// Stream ids per trial seed. Channels and positions never depend on the
// algorithm, so every algorithm sees the same draw.
enum TrialStream : std::uint64_t { kPositions = 1, kChannel = 2, kAlgorithm = 3 };

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string scenario_id(const ScenarioConfig& c, int k, int n) {
  return c.name + "-K" + std::to_string(k) + "-N" + std::to_string(n);
}

}  // namespace

Scenario make_scenario(const ScenarioConfig& c, int users, int irs_elements, std::uint64_t seed,
                       Algorithm algorithm) {
  Scenario s;
  s.system = c.system(users, irs_elements);
  SystemGeometry geom;
  geom.bs = c.bs;
  geom.irs = c.irs;
  geom.users = draw_user_positions(c.user_center, c.user_radius, users, RngStream(seed, kPositions));
  s.channel = generate(s.system, geom, c.pathloss, RngStream(seed, kChannel));
  s.semantic = c.semantic_for(users);
  s.weights = c.weights;
  s.algorithm = algorithm;
  return s;
}

RngStream algorithm_stream(std::uint64_t seed) { return RngStream(seed, kAlgorithm); }

ResultRow summarize(const Scenario& s, const Outcome& o, const std::string& id, std::uint64_t seed) {
  ResultRow r;
  r.scenario_id = id;
  r.algo = std::string(to_string(s.algorithm));
  r.seed = seed;
  r.users = s.system.users;
  r.irs_elements = s.system.irs_elements;
  r.iterations = o.iterations();
  r.status = std::string(to_string(o.status));
  if (o.trace.empty()) {
    r.avg_latency_s = r.avg_semantic_bits = r.avg_sinr_db = r.total_power_w = r.objective = kNaN;
    return r;
  }
  const double k = static_cast<double>(s.system.users);
  const auto& t = o.trace.back().terms;
  r.avg_latency_s = t.latency_s / k;
  double bits = 0.0;
  for (double b : o.bits) bits += b;
  r.avg_semantic_bits = bits / k;
  r.avg_sinr_db = 10.0 * std::log10(o.sinr.mean());
  r.total_power_w = t.power_w;
  r.objective = t.total;
  return r;
}

std::vector<ResultRow> run_sweep(const ScenarioConfig& c, const SweepSpec& sweep,
                                 const SweepOptions& options) {
  sweep.validate();
  if (c.algorithms.empty()) throw ContractViolation("run_sweep: no algorithms selected");
  if (c.seeds.empty()) throw ContractViolation("run_sweep: no seeds");

  struct Trial {
    int users;
    int irs_elements;
    std::uint64_t seed;
    Algorithm algorithm;
  };
  std::vector<Trial> trials;
  for (int v : sweep.values) {
    const int k = sweep.axis == SweepAxis::Users ? v : c.users;
    const int n = sweep.axis == SweepAxis::IrsUnits ? v : c.irs_elements;
    for (std::uint64_t seed : c.seeds) {
      for (Algorithm a : c.algorithms) trials.push_back({k, n, seed, a});
    }
  }

  std::vector<ResultRow> rows(trials.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < trials.size(); i = next++) {
      const Trial& t = trials[i];
      const std::string id = scenario_id(c, t.users, t.irs_elements);
      Scenario s;
      try {
        s = make_scenario(c, t.users, t.irs_elements, t.seed, t.algorithm);
        const Outcome o = run(s, c.solver, algorithm_stream(t.seed));
        rows[i] = summarize(s, o, id, t.seed);
        continue;
      } catch (const RankOneError&) {
        rows[i].status = "rank-one-error";
      } catch (const InfeasibleError&) {
        rows[i].status = "infeasible";
      } catch (const std::exception&) {
        rows[i].status = "error";
      }
      ResultRow& r = rows[i];
      r.scenario_id = id;
      r.algo = std::string(to_string(t.algorithm));
      r.seed = t.seed;
      r.users = t.users;
      r.irs_elements = t.irs_elements;
      r.avg_latency_s = r.avg_semantic_bits = r.avg_sinr_db = r.total_power_w = r.objective = kNaN;
      r.iterations = 0;
    }
  };

  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trials.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  sort_rows(rows);
  return rows;
}

}  // namespace semcom
