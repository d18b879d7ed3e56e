// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "semcom/errors.hpp"
#include "semcom/harness.hpp"

namespace semcom {

using nlohmann::json;

std::string_view to_string(SweepAxis a) {
  return a == SweepAxis::Users ? "users" : "irs-units";
}

SweepAxis sweep_axis_from_string(std::string_view s) {
  if (s == "users") return SweepAxis::Users;
  if (s == "irs-units") return SweepAxis::IrsUnits;
  throw ContractViolation("unknown sweep axis '" + std::string(s) + "' (expected users or irs-units)");
}

void SweepSpec::validate() const {
  if (values.empty()) throw ContractViolation("SweepSpec: values must be non-empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 1) throw ContractViolation("SweepSpec: values must be >= 1");
    if (i > 0 && values[i] <= values[i - 1]) {
      throw ContractViolation("SweepSpec: values must be strictly ascending");
    }
  }
}

SystemConfig ScenarioConfig::system(int k, int n) const {
  return SystemConfig::uniform(antennas, k, n, bandwidth_hz, noise_w);
}

std::vector<SemanticParams> ScenarioConfig::semantic_for(int k) const {
  std::vector<SemanticParams> out(static_cast<std::size_t>(k), semantic);
  for (std::size_t i = 0; i < out.size() && i < semantic_per_user.size(); ++i) {
    out[i] = semantic_per_user[i];
  }
  return out;
}

namespace {

// Collects every problem instead of stopping at the first one.
class Reader {
 public:
  std::vector<std::string> errors;

  // Rejects keys outside `allowed` for the object at `path`.
  bool object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
      errors.push_back(path + ": expected an object");
      return false;
    }
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : j.items()) {
      if (!ok.count(key)) errors.push_back(join(path, key) + ": unknown key");
    }
    return true;
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

  void number(const json& j, const std::string& path, const char* key, double& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number()) {
      errors.push_back(join(path, key) + ": expected a number");
      return;
    }
    out = v.get<double>();
    if (!std::isfinite(out)) errors.push_back(join(path, key) + ": must be finite");
  }

  void integer(const json& j, const std::string& path, const char* key, int& out,
               bool required = false) {
    if (!j.contains(key)) {
      if (required) errors.push_back(join(path, key) + ": missing required key");
      return;
    }
    const json& v = j.at(key);
    if (!v.is_number_integer()) {
      errors.push_back(join(path, key) + ": expected an integer");
      return;
    }
    out = v.get<int>();
  }

  void boolean(const json& j, const std::string& path, const char* key, bool& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_boolean()) {
      errors.push_back(join(path, key) + ": expected true or false");
      return;
    }
    out = v.get<bool>();
  }

  void point(const json& j, const std::string& path, const char* key, Point& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      errors.push_back(join(path, key) + ": expected [x, y]");
      return;
    }
    out = {v[0].get<double>(), v[1].get<double>()};
  }

  // Runs a module validator and records its message.
  template <class F>
  void check(const std::string& path, F&& f) {
    try {
      f();
    } catch (const std::exception& e) {
      errors.push_back(path + ": " + e.what());
    }
  }
};

void read_semantic(Reader& r, const json& j, const std::string& path, SemanticParams& p) {
  if (!r.object(j, path, {"c", "d", "delta"})) return;
  r.number(j, path, "c", p.c);
  r.number(j, path, "d", p.d);
  r.number(j, path, "delta", p.delta);
  r.check(path, [&] { p.validate(); });
}

std::vector<std::uint64_t> default_seeds() {
  std::vector<std::uint64_t> s(20);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = i;
  return s;
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("syntax error: ") + e.what()});
  }

  ScenarioConfig c;
  c.seeds = default_seeds();
  Reader r;
  if (!r.object(root, "<root>", {"name", "system", "geometry", "pathloss", "weights", "semantic",
                                 "algorithms", "solver", "seeds", "sweep"})) {
    throw ConfigError(r.errors);
  }

  if (root.contains("name")) {
    if (!root["name"].is_string()) {
      r.errors.push_back("name: expected a string");
    } else {
      c.name = root["name"].get<std::string>();
      if (c.name.empty() || c.name.find_first_of(",\"\n\r") != std::string::npos) {
        r.errors.push_back("name: must be non-empty without commas, quotes or newlines");
      }
    }
  }

  if (!root.contains("system")) {
    r.errors.push_back("system: missing required section");
  } else if (const json& s = root["system"];
             r.object(s, "system", {"antennas", "users", "irs_elements", "bandwidth_hz", "noise_w",
                                    "allow_users_exceed_antennas"})) {
    r.integer(s, "system", "antennas", c.antennas, true);
    r.integer(s, "system", "users", c.users, true);
    r.integer(s, "system", "irs_elements", c.irs_elements, true);
    r.number(s, "system", "bandwidth_hz", c.bandwidth_hz);
    r.number(s, "system", "noise_w", c.noise_w);
    r.boolean(s, "system", "allow_users_exceed_antennas", c.allow_users_exceed_antennas);
    r.check("system", [&] { c.system(c.users, c.irs_elements).validate(); });
  }

  if (root.contains("geometry")) {
    const json& g = root["geometry"];
    if (r.object(g, "geometry", {"bs", "irs", "user_center", "user_radius"})) {
      r.point(g, "geometry", "bs", c.bs);
      r.point(g, "geometry", "irs", c.irs);
      r.point(g, "geometry", "user_center", c.user_center);
      r.number(g, "geometry", "user_radius", c.user_radius);
      if (!(c.user_radius >= 0.0)) r.errors.push_back("geometry.user_radius: must be >= 0");
      // Users must stay clear of the BS and the IRS for the path loss to be finite.
      const double clear_bs = distance(c.bs, c.user_center) - c.user_radius;
      const double clear_irs = distance(c.irs, c.user_center) - c.user_radius;
      if (!(clear_bs > 0.0) || !(clear_irs > 0.0)) {
        r.errors.push_back("geometry: the user disc must not contain the BS or the IRS");
      }
      if (!(distance(c.bs, c.irs) > 0.0)) {
        r.errors.push_back("geometry: BS and IRS must not coincide");
      }
    }
  }

  if (root.contains("pathloss")) {
    const json& p = root["pathloss"];
    if (r.object(p, "pathloss", {"c0", "alpha_direct", "alpha_bs_irs", "alpha_irs_user"})) {
      r.number(p, "pathloss", "c0", c.pathloss.c0);
      r.number(p, "pathloss", "alpha_direct", c.pathloss.alpha_direct);
      r.number(p, "pathloss", "alpha_bs_irs", c.pathloss.alpha_bs_irs);
      r.number(p, "pathloss", "alpha_irs_user", c.pathloss.alpha_irs_user);
      r.check("pathloss", [&] { c.pathloss.validate(); });
      const auto& pl = c.pathloss;
      if (pl.alpha_direct < 2.0 || pl.alpha_bs_irs < 2.0 || pl.alpha_irs_user < 2.0) {
        r.errors.push_back("pathloss: exponents must be >= 2 (free-space or worse)");
      }
    }
  }

  if (root.contains("weights")) {
    const json& w = root["weights"];
    if (r.object(w, "weights", {"q1", "q2", "q3"})) {
      r.number(w, "weights", "q1", c.weights.q1);
      r.number(w, "weights", "q2", c.weights.q2);
      r.number(w, "weights", "q3", c.weights.q3);
      r.check("weights", [&] { c.weights.validate(); });
    }
  }

  if (root.contains("semantic")) {
    const json& s = root["semantic"];
    if (r.object(s, "semantic", {"c", "d", "delta", "per_user"})) {
      r.number(s, "semantic", "c", c.semantic.c);
      r.number(s, "semantic", "d", c.semantic.d);
      r.number(s, "semantic", "delta", c.semantic.delta);
      r.check("semantic", [&] { c.semantic.validate(); });
      if (s.contains("per_user")) {
        const json& pu = s["per_user"];
        if (!pu.is_array()) {
          r.errors.push_back("semantic.per_user: expected a list");
        } else {
          for (std::size_t i = 0; i < pu.size(); ++i) {
            SemanticParams p = c.semantic;
            read_semantic(r, pu[i], "semantic.per_user[" + std::to_string(i) + "]", p);
            c.semantic_per_user.push_back(p);
          }
        }
      }
    }
  }

  if (root.contains("algorithms")) {
    const json& a = root["algorithms"];
    if (!a.is_array() || a.empty()) {
      r.errors.push_back("algorithms: expected a non-empty list");
    } else {
      c.algorithms.clear();
      for (const auto& v : a) {
        if (!v.is_string()) {
          r.errors.push_back("algorithms: entries must be strings");
          continue;
        }
        try {
          const Algorithm alg = algorithm_from_string(v.get<std::string>());
          if (std::find(c.algorithms.begin(), c.algorithms.end(), alg) != c.algorithms.end()) {
            r.errors.push_back("algorithms: duplicate '" + v.get<std::string>() + "'");
          } else {
            c.algorithms.push_back(alg);
          }
        } catch (const std::exception& e) {
          r.errors.push_back(std::string("algorithms: ") + e.what());
        }
      }
    }
  }

  if (root.contains("solver")) {
    const json& s = root["solver"];
    if (r.object(s, "solver", {"epsilon", "max_iter", "gap_tol", "samples", "randomization",
                               "initial_bits", "initial_power_w", "rank_tol"})) {
      auto& so = c.solver;
      r.number(s, "solver", "epsilon", so.epsilon);
      r.integer(s, "solver", "max_iter", so.max_iter);
      r.number(s, "solver", "gap_tol", so.sdp.gap_tol);
      r.integer(s, "solver", "samples", so.randomization.samples);
      r.number(s, "solver", "initial_bits", so.initial_bits);
      r.number(s, "solver", "initial_power_w", so.initial_power_w);
      r.number(s, "solver", "rank_tol", so.rank_tol);
      if (s.contains("randomization")) {
        const json& m = s["randomization"];
        if (m == "eigen-mean") {
          so.randomization.strategy = RandomizationStrategy::EigenMean;
        } else if (m == "zero-mean") {
          so.randomization.strategy = RandomizationStrategy::ZeroMean;
        } else {
          r.errors.push_back("solver.randomization: expected eigen-mean or zero-mean");
        }
      }
      if (!(so.sdp.gap_tol > 0.0)) r.errors.push_back("solver.gap_tol: must be > 0");
      if (!(so.rank_tol > 0.0 && so.rank_tol < 1.0)) {
        r.errors.push_back("solver.rank_tol: must lie in (0, 1)");
      }
      r.check("solver", [&] { so.validate(); });
    }
  }

  if (root.contains("seeds")) {
    const json& s = root["seeds"];
    if (s.is_array()) {
      c.seeds.clear();
      for (const auto& v : s) {
        if (!v.is_number_unsigned()) {
          r.errors.push_back("seeds: entries must be non-negative integers");
          continue;
        }
        c.seeds.push_back(v.get<std::uint64_t>());
      }
      if (c.seeds.empty()) r.errors.push_back("seeds: list must be non-empty");
      std::set<std::uint64_t> uniq(c.seeds.begin(), c.seeds.end());
      if (uniq.size() != c.seeds.size()) r.errors.push_back("seeds: duplicate seeds");
    } else if (r.object(s, "seeds", {"count", "first"})) {
      int count = 20;
      int first = 0;
      r.integer(s, "seeds", "count", count);
      r.integer(s, "seeds", "first", first);
      if (count < 1 || first < 0) {
        r.errors.push_back("seeds: count must be >= 1 and first >= 0");
      } else {
        c.seeds.resize(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) c.seeds[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(first + i);
      }
    }
  }

  if (root.contains("sweep")) {
    const json& s = root["sweep"];
    if (r.object(s, "sweep", {"axis", "values"})) {
      if (!s.contains("axis") || !s["axis"].is_string()) {
        r.errors.push_back("sweep.axis: expected users or irs-units");
      } else {
        r.check("sweep.axis", [&] { c.sweep.axis = sweep_axis_from_string(s["axis"].get<std::string>()); });
      }
      if (!s.contains("values") || !s["values"].is_array()) {
        r.errors.push_back("sweep.values: expected a list of counts");
      } else {
        for (const auto& v : s["values"]) {
          if (!v.is_number_integer()) {
            r.errors.push_back("sweep.values: entries must be integers");
            continue;
          }
          c.sweep.values.push_back(v.get<int>());
        }
        r.check("sweep", [&] { c.sweep.validate(); });
      }
    }
  }

  // K <= M keeps the SINR targets attainable for generic channels.
  int max_users = c.users;
  if (c.sweep.axis == SweepAxis::Users && !c.sweep.values.empty()) {
    max_users = std::max(max_users, c.sweep.values.back());
  }
  if (max_users > c.antennas) {
    if (c.allow_users_exceed_antennas) {
      c.warnings.push_back("users (" + std::to_string(max_users) + ") exceed antennas (" +
                           std::to_string(c.antennas) + "); trials may be infeasible");
    } else {
      r.errors.push_back("system: users (" + std::to_string(max_users) + ") exceed antennas (" +
                         std::to_string(c.antennas) +
                         "); set allow_users_exceed_antennas to override");
    }
  }
  if (c.semantic_per_user.size() > static_cast<std::size_t>(std::max(max_users, 0))) {
    c.warnings.push_back("semantic.per_user has more entries than users; extras are unused");
  }

  if (!r.errors.empty()) throw ConfigError(r.errors);
  return c;
}

ScenarioConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file '" + path.string() + "'"});
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config_text(os.str());
}

std::string config_to_json(const ScenarioConfig& c) {
  const auto sem = [](const SemanticParams& p) {
    return json{{"c", p.c}, {"d", p.d}, {"delta", p.delta}};
  };
  json per_user = json::array();
  for (const auto& p : c.semantic_per_user) per_user.push_back(sem(p));
  json algos = json::array();
  for (auto a : c.algorithms) algos.push_back(std::string(to_string(a)));
  json sweep = nullptr;
  if (!c.sweep.values.empty()) {
    sweep = json{{"axis", std::string(to_string(c.sweep.axis))}, {"values", c.sweep.values}};
  }
  json semantic = sem(c.semantic);
  semantic["per_user"] = per_user;

  json j{
      {"name", c.name},
      {"system",
       {{"antennas", c.antennas},
        {"users", c.users},
        {"irs_elements", c.irs_elements},
        {"bandwidth_hz", c.bandwidth_hz},
        {"noise_w", c.noise_w},
        {"allow_users_exceed_antennas", c.allow_users_exceed_antennas}}},
      {"geometry",
       {{"bs", {c.bs.x, c.bs.y}},
        {"irs", {c.irs.x, c.irs.y}},
        {"user_center", {c.user_center.x, c.user_center.y}},
        {"user_radius", c.user_radius}}},
      {"pathloss",
       {{"c0", c.pathloss.c0},
        {"alpha_direct", c.pathloss.alpha_direct},
        {"alpha_bs_irs", c.pathloss.alpha_bs_irs},
        {"alpha_irs_user", c.pathloss.alpha_irs_user}}},
      {"weights", {{"q1", c.weights.q1}, {"q2", c.weights.q2}, {"q3", c.weights.q3}}},
      {"semantic", semantic},
      {"algorithms", algos},
      {"solver",
       {{"epsilon", c.solver.epsilon},
        {"max_iter", c.solver.max_iter},
        {"gap_tol", c.solver.sdp.gap_tol},
        {"samples", c.solver.randomization.samples},
        {"randomization", c.solver.randomization.strategy == RandomizationStrategy::EigenMean
                              ? "eigen-mean"
                              : "zero-mean"},
        {"initial_bits", c.solver.initial_bits},
        {"initial_power_w", c.solver.initial_power_w},
        {"rank_tol", c.solver.rank_tol}}},
      {"seeds", c.seeds},
  };
  if (!sweep.is_null()) j["sweep"] = sweep;
  return j.dump(2);
}

}  // namespace semcom
