// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors
//
// semcom: run sweeps, validate configs and run the verification oracles.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "semcom/errors.hpp"
#include "semcom/harness.hpp"
#include "semcom/oracles.hpp"

namespace fs = std::filesystem;
using namespace semcom;

namespace {

std::vector<int> parse_values(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size()) {
      throw ConfigError({"--values: '" + item + "' is not an integer"});
    }
    out.push_back(v);
  }
  return out;
}

std::vector<Algorithm> parse_algos(const std::string& text) {
  std::vector<Algorithm> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(algorithm_from_string(item));
    } catch (const std::exception& e) {
      throw ConfigError({std::string("--algos: ") + e.what()});
    }
  }
  return out;
}

void print_warnings(const ScenarioConfig& c) {
  for (const auto& w : c.warnings) std::cerr << "warning: " << w << "\n";
}

struct RunArgs {
  std::string config;
  std::string out;
  std::string sweep;
  std::string values;
  std::string algos;
  int seeds = 0;
  unsigned threads = 0;
  bool plots = false;
};

int cmd_run(const RunArgs& a) {
  ScenarioConfig c = parse_config(a.config);
  SweepSpec sweep = c.sweep;
  if (!a.sweep.empty()) {
    try {
      const SweepAxis axis = sweep_axis_from_string(a.sweep);
      if (axis != sweep.axis) sweep.values.clear();
      sweep.axis = axis;
    } catch (const std::exception& e) {
      throw ConfigError({std::string("--sweep: ") + e.what()});
    }
  }
  if (!a.values.empty()) sweep.values = parse_values(a.values);
  if (sweep.values.empty()) {
    throw ConfigError({"no sweep values: give --values or a sweep section in the config"});
  }
  try {
    sweep.validate();
  } catch (const std::exception& e) {
    throw ConfigError({e.what()});
  }
  if (sweep.axis == SweepAxis::Users && sweep.values.back() > c.antennas &&
      !c.allow_users_exceed_antennas) {
    throw ConfigError({"sweep: users exceed antennas; set system.allow_users_exceed_antennas"});
  }
  if (!a.algos.empty()) c.algorithms = parse_algos(a.algos);
  if (a.seeds > 0) {
    c.seeds.resize(static_cast<std::size_t>(a.seeds));
    for (int i = 0; i < a.seeds; ++i) c.seeds[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(i);
  }
  print_warnings(c);

  const fs::path out(a.out);
  fs::create_directories(out);
  SweepOptions opts;
  opts.threads = a.threads;
  std::cerr << "running " << sweep.values.size() * c.seeds.size() * c.algorithms.size()
            << " trials\n";
  const auto rows = run_sweep(c, sweep, opts);
  write_csv(rows, out / "results.csv");
  write_manifest(c, sweep, out / "manifest.txt");
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.status != "converged" && r.status != "max-iter";
  std::cout << "wrote " << (out / "results.csv").string() << " (" << rows.size() << " rows, "
            << failed << " failed)\n";
  if (a.plots) {
    const PlotReport p = emit_plots(rows, out);
    for (const auto& w : p.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& f : p.written) std::cout << "wrote " << f.string() << "\n";
  }
  return 0;
}

int cmd_validate(const std::string& path) {
  const ScenarioConfig c = parse_config(path);
  print_warnings(c);
  std::cout << config_to_json(c) << "\n";
  return 0;
}

int cmd_oracle(const std::string& path) {
  const ScenarioConfig c = parse_config(path);
  print_warnings(c);
  const std::uint64_t seed = c.seeds.front();
  const int k_users = c.users;
  const int n = std::min(c.irs_elements, 8);
  std::printf("instance: K=%d M=%d N=%d seed=%llu\n", k_users, c.antennas, n,
              static_cast<unsigned long long>(seed));

  Scenario s = make_scenario(c, k_users, n, seed, Algorithm::OptSdp);
  const auto& noise = s.system.noise_w;

  // Duality: SDP power minimum against the fixed-point iteration at 0 dB targets.
  RngStream phase_stream = algorithm_stream(seed).fork(99);
  const IrsPhase phi = random_phases(n, phase_stream);
  const CompositeChannel cc = compose(s.channel, phi);
  SinrTargets t{Eigen::VectorXd::Ones(k_users)};
  const PowerMinSolution sdp = solve_power_min(cc, t, noise);
  const DualityPower dual = duality_fixed_point(cc.h, t.gamma, noise);
  const double p_sdp = sdp.w.squaredNorm();
  std::printf("duality: sdp_power=%.12g fixed_point_power=%.12g rel_residual=%.3e (%d iterations)\n",
              p_sdp, dual.total_power, std::abs(p_sdp - dual.total_power) / dual.total_power,
              dual.iterations);
  double worst_rank = 0.0;
  for (double r : sdp.rank_ratios) worst_rank = std::max(worst_rank, r);
  std::printf("rank-one: max lambda2/lambda1=%.3e\n", worst_rank);

  // Semantic KKT at the rate of user 0.
  const Eigen::VectorXd sinr = sinr_all(cc, sdp.w, noise);
  const double r0 = rate(sinr(0), s.system.bandwidth_hz);
  const SemanticAllocation alloc = optimize_bits(r0, s.weights, s.semantic[0]);
  if (alloc.binding) {
    std::printf("semantic: binding floor, |xi(s)-delta|=%.3e\n",
                std::abs(utility(alloc.bits, s.semantic[0]) - s.semantic[0].delta));
  } else {
    const double lhs = s.weights.q1 / r0;
    std::printf("semantic: stationarity residual=%.3e (relative)\n",
                std::abs(lhs - s.weights.q3 * utility_grad(alloc.bits, s.semantic[0])) / lhs);
  }

  // Grid: coordinate descent over 16 phase levels from the optimized IRS.
  const Outcome o = run(s, c.solver, algorithm_stream(seed));
  if (o.status == OutcomeStatus::Infeasible) {
    std::printf("grid: skipped, opt-sdp infeasible (%s)\n", o.message.c_str());
    return 0;
  }
  const IrsQuadratics q = build_quadratics(s.channel, o.w);
  const PhaseObjective f = [&](const IrsPhase& p) {
    try {
      return objective(s.channel, o.w, o.bits, p, s.weights, s.semantic, s.system.bandwidth_hz, noise)
          .total;
    } catch (const InfeasibleLinkError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  const double f_opt = f(o.phase);
  const IrsPhase g = grid_oracle(q, f, o.phase, 16);
  const double f_grid = f(g);
  std::printf("grid: opt_sdp_objective=%.12g grid_objective=%.12g rel_improvement=%.3e\n", f_opt,
              f_grid, (f_opt - f_grid) / std::abs(f_opt));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-user IRS-aided semantic downlink simulator and optimizer"};
  app.require_subcommand(1);

  RunArgs ra;
  auto* run_cmd = app.add_subcommand("run", "Run a sweep and write CSV, manifest and plots");
  run_cmd->add_option("--config", ra.config, "Config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", ra.out, "Output directory")->required();
  run_cmd->add_option("--sweep", ra.sweep, "Sweep axis")->check(CLI::IsMember({"users", "irs-units"}));
  run_cmd->add_option("--values", ra.values, "Comma-separated sweep values");
  run_cmd->add_option("--algos", ra.algos, "Comma-separated algorithms");
  run_cmd->add_option("--seeds", ra.seeds, "Use seeds 0..n-1")->check(CLI::PositiveNumber);
  run_cmd->add_option("--threads", ra.threads, "Worker threads (0 = hardware)");
  run_cmd->add_flag("--plots", ra.plots, "Write SVG plots");

  std::string vpath;
  auto* val_cmd = app.add_subcommand("validate", "Parse a config and print it resolved");
  val_cmd->add_option("--config", vpath, "Config file")->required()->check(CLI::ExistingFile);

  std::string opath;
  auto* ora_cmd = app.add_subcommand("oracle", "Run duality, KKT and grid oracles on a small instance");
  ora_cmd->add_option("--config", opath, "Config file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(ra);
    if (*val_cmd) return cmd_validate(vpath);
    if (*ora_cmd) return cmd_oracle(opath);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
