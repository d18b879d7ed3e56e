// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors

#include "semcom/altopt.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "semcom/errors.hpp"

namespace semcom {

namespace {

enum StreamKey : std::uint64_t { kInitialPhase = 11, kRandomization = 12 };

std::string user_list(const std::vector<int>& users) {
  std::ostringstream os;
  for (std::size_t i = 0; i < users.size(); ++i) os << (i ? ", " : "") << users[i];
  return os.str();
}

}  // namespace

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::OptSdp: return "opt-sdp";
    case Algorithm::OptRandIrs: return "opt-randirs";
    case Algorithm::OptMmse: return "opt-mmse";
  }
  return "unknown";
}

Algorithm algorithm_from_string(std::string_view s) {
  if (s == "opt-sdp") return Algorithm::OptSdp;
  if (s == "opt-randirs") return Algorithm::OptRandIrs;
  if (s == "opt-mmse") return Algorithm::OptMmse;
  throw ContractViolation("unknown algorithm '" + std::string(s) +
                          "' (expected opt-sdp, opt-randirs or opt-mmse)");
}

std::string_view to_string(OutcomeStatus s) {
  switch (s) {
    case OutcomeStatus::Converged: return "converged";
    case OutcomeStatus::MaxIter: return "max-iter";
    case OutcomeStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

ObjectiveTerms objective(const ChannelRealization& cr, const BeamformingMatrix& w,
                         const std::vector<double>& bits, const IrsPhase& phi,
                         const ObjectiveWeights& weights, const std::vector<SemanticParams>& params,
                         double bandwidth_hz, const std::vector<double>& noise_w) {
  const std::size_t k_users = cr.direct.size();
  if (bits.size() != k_users || params.size() != k_users) {
    throw ContractViolation("objective: bits and semantic parameters need one entry per user");
  }
  ObjectiveTerms t;
  std::vector<int> below_floor;
  for (std::size_t k = 0; k < k_users; ++k) {
    const double xi = utility(bits[k], params[k]);
    if (xi < params[k].delta - 1e-9) below_floor.push_back(static_cast<int>(k));
    t.utility += xi;
  }
  if (!below_floor.empty()) {
    throw ContractViolation("objective: utility floor violated for users " + user_list(below_floor));
  }
  const CompositeChannel cc = compose(cr, phi);
  const Eigen::VectorXd sinr = sinr_all(cc, w, noise_w);
  std::vector<int> dead;
  for (std::size_t k = 0; k < k_users; ++k) {
    const double r = rate(sinr(static_cast<Eigen::Index>(k)), bandwidth_hz);
    const double l = latency(bits[k], r);
    if (std::isinf(l)) dead.push_back(static_cast<int>(k));
    t.latency_s += l;
  }
  if (!dead.empty()) {
    throw InfeasibleLinkError("objective: zero rate with bits pending for users " + user_list(dead),
                              dead);
  }
  t.power_w = w.squaredNorm();
  t.total = weights.q1 * t.latency_s + weights.q2 * t.power_w - weights.q3 * t.utility;
  return t;
}

void Scenario::validate() const {
  system.validate();
  channel.validate();
  weights.validate();
  if (channel.users() != system.users || channel.antennas() != system.antennas ||
      channel.irs_elements() != system.irs_elements) {
    throw ContractViolation("Scenario: channel dimensions do not match the system configuration");
  }
  if (static_cast<int>(semantic.size()) != system.users) {
    throw ContractViolation("Scenario: one set of semantic parameters per user is required");
  }
  for (const auto& p : semantic) p.validate();
}

void SolverSettings::validate() const {
  if (!(epsilon > 0.0)) throw ContractViolation("SolverSettings: epsilon must be > 0");
  if (max_iter < 1) throw ContractViolation("SolverSettings: max_iter must be >= 1");
  if (!(initial_bits >= 0.0)) throw ContractViolation("SolverSettings: initial_bits must be >= 0");
  if (!(initial_power_w > 0.0)) throw ContractViolation("SolverSettings: initial_power_w must be > 0");
  randomization.validate();
}

double change_rate(double previous, double current) {
  const double den = previous > 0.0 ? previous : std::abs(previous) + 1e-12;
  return (previous - current) / den;
}

Outcome run(const Scenario& scenario, const SolverSettings& settings, const RngStream& stream) {
  scenario.validate();
  settings.validate();

  const auto& sys = scenario.system;
  const auto& cr = scenario.channel;
  const auto k_users = static_cast<std::size_t>(sys.users);
  const bool optimize_irs = scenario.algorithm == Algorithm::OptSdp;
  const Beamformer beamformer =
      scenario.algorithm == Algorithm::OptMmse ? Beamformer::Mmse : Beamformer::Sdp;

  PowerMinSettings pm;
  pm.sdp = settings.sdp;
  pm.rank_tol = settings.rank_tol;

  Outcome out;
  if (scenario.algorithm == Algorithm::OptMmse) {
    out.phase = IrsPhase::off(sys.irs_elements);
  } else {
    RngStream s = stream.fork(kInitialPhase);
    out.phase = random_phases(sys.irs_elements, s);
  }
  out.bits.resize(k_users);
  for (std::size_t k = 0; k < k_users; ++k) {
    out.bits[k] = std::max(min_bits(scenario.semantic[k]), settings.initial_bits);
  }

  const auto eval = [&](const BeamformingMatrix& w, const std::vector<double>& bits,
                        const IrsPhase& phi) {
    return objective(cr, w, bits, phi, scenario.weights, scenario.semantic, sys.bandwidth_hz,
                     sys.noise_w);
  };

  ObjectiveTerms current;
  try {
    const CompositeChannel cc = compose(cr, out.phase);
    out.w = mmse_directions(cc.h, sys.noise_w) *
            std::sqrt(settings.initial_power_w / static_cast<double>(k_users));
    current = eval(out.w, out.bits, out.phase);
  } catch (const InfeasibleError& e) {
    out.status = OutcomeStatus::Infeasible;
    out.message = e.what();
    return out;
  } catch (const InfeasibleLinkError& e) {
    out.status = OutcomeStatus::Infeasible;
    out.message = e.what();
    return out;
  }
  out.trace.push_back({0, current, std::numeric_limits<double>::infinity(), false, 0, false});

  for (int t = 1; t <= settings.max_iter; ++t) {
    IterationRecord rec;
    rec.iteration = t;

    // Beamforming at the SINR the current latency already achieves.
    {
      const CompositeChannel cc = compose(cr, out.phase);
      const Eigen::VectorXd sinr = sinr_all(cc, out.w, sys.noise_w);
      std::vector<double> seconds(k_users);
      for (std::size_t k = 0; k < k_users; ++k) {
        seconds[k] = latency(out.bits[k], rate(sinr(static_cast<Eigen::Index>(k)), sys.bandwidth_hz));
      }
      const SinrTargets targets = targets_from(out.bits, seconds, sys.bandwidth_hz);
      BackoffResult bf;
      try {
        bf = beamform_with_backoff(beamformer, cc, targets, sys.noise_w, pm);
      } catch (const InfeasibleError& e) {
        out.status = OutcomeStatus::Infeasible;
        out.message = std::string("beamforming infeasible at iteration ") + std::to_string(t) +
                      ": " + e.what();
        break;
      }
      rec.backoffs = bf.backoffs;
      try {
        const ObjectiveTerms cand = eval(bf.w, out.bits, out.phase);
        if (cand.total <= current.total) {
          out.w = bf.w;
          current = cand;
          rec.beam_accepted = true;
        }
      } catch (const InfeasibleLinkError&) {
      }
    }

    // Semantic bits: exact per-user minimizer at the current rates.
    {
      const Eigen::VectorXd sinr = sinr_all(compose(cr, out.phase), out.w, sys.noise_w);
      std::vector<double> bits(k_users);
      for (std::size_t k = 0; k < k_users; ++k) {
        const double r = rate(sinr(static_cast<Eigen::Index>(k)), sys.bandwidth_hz);
        bits[k] = optimize_bits(r, scenario.weights, scenario.semantic[k]).bits;
      }
      const ObjectiveTerms cand = eval(out.w, bits, out.phase);
      if (cand.total <= current.total) {
        out.bits = std::move(bits);
        current = cand;
      }
    }

    if (optimize_irs) {
      const IrsQuadratics q = build_quadratics(cr, out.w);
      const PhaseObjective f = [&](const IrsPhase& phi) {
        try {
          return eval(out.w, out.bits, phi).total;
        } catch (const InfeasibleLinkError&) {
          return std::numeric_limits<double>::infinity();
        }
      };
      try {
        const ComplexMatrix v = solve_irs_sdr(q, settings.sdp);
        RngStream draws = stream.fork(kRandomization, static_cast<std::uint64_t>(t));
        const RandomizeResult r = randomize(v, q, settings.randomization, f, out.phase, draws);
        if (r.improved) {
          out.phase = r.phase;
          current = eval(out.w, out.bits, out.phase);
          rec.irs_improved = true;
        }
      } catch (const std::runtime_error&) {
        // SDR failure leaves the incumbent phases in place.
      }
    }

    const double prev = out.trace.back().terms.total;
    rec.terms = current;
    rec.change_rate = change_rate(prev, current.total);
    out.trace.push_back(rec);
    if (rec.change_rate <= settings.epsilon) {
      out.status = OutcomeStatus::Converged;
      break;
    }
  }
  if (out.status != OutcomeStatus::Converged && out.status != OutcomeStatus::Infeasible) {
    out.status = OutcomeStatus::MaxIter;
  }
  out.sinr = sinr_all(compose(cr, out.phase), out.w, sys.noise_w);
  return out;
}

}  // namespace semcom
