#pragma once

// JSON scenario schema and machine-readable reports. Scenarios bundle fans,
// states, two-atom measures referencing them, and experiment requests; the
// schema is versioned and unknown major versions are rejected.

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eulerwave/fan_construction.hpp"
#include "eulerwave/lifted_algebra.hpp"

namespace eulerwave {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kSchemaVersion = "1.0.0";

struct YmSpec {
  double lambda = 0.5;
  std::string atom_a, atom_b;
  double gamma = 2.0;
};

struct ExperimentSpec {
  std::string id;
  std::string kind;
  json params;
};

struct Scenario {
  std::string version = kSchemaVersion;
  // insertion-ordered entry ids so serialization is deterministic
  std::vector<std::pair<std::string, std::string>> order;  // (id, type)
  std::map<std::string, FanSubsolution> fans;
  std::map<std::string, State> states;
  std::map<std::string, YmSpec> yms;
  std::vector<ExperimentSpec> experiments;
};

class scenario_error : public std::runtime_error {
 public:
  explicit scenario_error(std::vector<std::string> problems)
      : std::runtime_error(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "scenario validation failed:";
    for (const auto& p : v) s += "\n  - " + p;
    return s;
  }
  std::vector<std::string> problems_;
};

namespace detail {

inline bool finite_number(const json& j) { return j.is_number() && std::isfinite(j.get<double>()); }

inline std::optional<int> major_version(const std::string& v) {
  std::size_t dot = v.find('.');
  try {
    return std::stoi(v.substr(0, dot));
  } catch (...) {
    return std::nullopt;
  }
}

}  // namespace detail

// Parse and validate; every violation is collected before aborting.
inline Scenario parse_scenario(const json& j) {
  std::vector<std::string> errs;
  Scenario sc;
  if (!j.is_object()) {
    throw scenario_error({"top level must be an object"});
  }
  if (!j.contains("version") || !j["version"].is_string()) {
    errs.push_back("missing string field 'version'");
  } else {
    sc.version = j["version"].get<std::string>();
    auto major = detail::major_version(sc.version);
    if (!major) errs.push_back("version '" + sc.version + "' is not a semver string");
    else if (*major != 1)
      errs.push_back("unsupported schema major version " + std::to_string(*major));
  }
  if (!j.contains("entries") || !j["entries"].is_array()) {
    errs.push_back("missing array field 'entries'");
    throw scenario_error(errs);
  }

  auto need_number = [&errs](const json& e, const char* field, const std::string& id) -> double {
    if (!e.contains(field) || !detail::finite_number(e[field])) {
      errs.push_back("entry '" + id + "': field '" + field + "' must be a finite number");
      return 0.0;
    }
    return e[field].get<double>();
  };

  for (const auto& e : j["entries"]) {
    if (!e.is_object() || !e.contains("type") || !e["type"].is_string() || !e.contains("id") ||
        !e["id"].is_string()) {
      errs.push_back("every entry needs string fields 'type' and 'id'");
      continue;
    }
    const std::string type = e["type"].get<std::string>();
    const std::string id = e["id"].get<std::string>();
    bool duplicate = sc.fans.count(id) || sc.states.count(id) || sc.yms.count(id);
    for (const auto& ex : sc.experiments) duplicate = duplicate || ex.id == id;
    if (duplicate) {
      errs.push_back("duplicate id '" + id + "'");
      continue;
    }
    if (type == "fan") {
      FanSubsolution f;
      f.nu_minus = need_number(e, "nu_minus", id);
      f.nu_plus = need_number(e, "nu_plus", id);
      f.rho1 = need_number(e, "rho1", id);
      f.alpha = need_number(e, "alpha", id);
      f.beta = need_number(e, "beta", id);
      f.gamma = need_number(e, "gamma", id);
      f.delta = need_number(e, "delta", id);
      f.C1 = need_number(e, "C1", id);
      sc.fans[id] = f;
    } else if (type == "state") {
      State s;
      s.rho = need_number(e, "rho", id);
      if (!e.contains("u") || !e["u"].is_array() || e["u"].size() != 2 ||
          !detail::finite_number(e["u"][0]) || !detail::finite_number(e["u"][1])) {
        errs.push_back("entry '" + id + "': field 'u' must be a 2-array of finite numbers");
      } else {
        s.u = Vec2(e["u"][0].get<double>(), e["u"][1].get<double>());
      }
      if (s.rho < 0.0) errs.push_back("entry '" + id + "': rho must be nonnegative");
      sc.states[id] = s;
    } else if (type == "ym") {
      YmSpec y;
      y.lambda = need_number(e, "lambda", id);
      y.gamma = e.contains("gamma") ? need_number(e, "gamma", id) : 2.0;
      for (const char* field : {"atom_a", "atom_b"}) {
        if (!e.contains(field) || !e[field].is_string())
          errs.push_back("entry '" + id + "': field '" + std::string(field) + "' must be an id");
      }
      if (e.contains("atom_a") && e["atom_a"].is_string()) y.atom_a = e["atom_a"];
      if (e.contains("atom_b") && e["atom_b"].is_string()) y.atom_b = e["atom_b"];
      if (!(y.lambda > 0.0 && y.lambda < 1.0))
        errs.push_back("entry '" + id + "': lambda must lie strictly inside (0,1)");
      if (!(y.gamma > 1.0)) errs.push_back("entry '" + id + "': gamma must exceed 1");
      sc.yms[id] = y;
    } else if (type == "experiment") {
      ExperimentSpec ex;
      ex.id = id;
      if (!e.contains("kind") || !e["kind"].is_string())
        errs.push_back("entry '" + id + "': experiment needs a string 'kind'");
      else
        ex.kind = e["kind"];
      ex.params = e.contains("params") ? e["params"] : json::object();
      sc.experiments.push_back(ex);
    } else {
      errs.push_back("entry '" + id + "': unknown type '" + type + "'");
      continue;
    }
    sc.order.emplace_back(id, type);
  }

  // reference resolution
  for (const auto& [id, y] : sc.yms) {
    for (const std::string* ref : {&y.atom_a, &y.atom_b}) {
      if (!sc.fans.count(*ref) && !sc.states.count(*ref))
        errs.push_back("ym '" + id + "': atom reference '" + *ref + "' does not resolve");
    }
  }
  if (!errs.empty()) throw scenario_error(errs);
  return sc;
}

inline Scenario parse_scenario_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw scenario_error({std::string("JSON parse error: ") + e.what()});
  }
  return parse_scenario(j);
}

inline json serialize_scenario(const Scenario& sc) {
  json j;
  j["version"] = sc.version;
  j["entries"] = json::array();
  for (const auto& [id, type] : sc.order) {
    json e;
    e["type"] = type;
    e["id"] = id;
    if (type == "fan") {
      const FanSubsolution& f = sc.fans.at(id);
      e["nu_minus"] = f.nu_minus;
      e["nu_plus"] = f.nu_plus;
      e["rho1"] = f.rho1;
      e["alpha"] = f.alpha;
      e["beta"] = f.beta;
      e["gamma"] = f.gamma;
      e["delta"] = f.delta;
      e["C1"] = f.C1;
    } else if (type == "state") {
      const State& s = sc.states.at(id);
      e["rho"] = s.rho;
      e["u"] = {s.u.x(), s.u.y()};
    } else if (type == "ym") {
      const YmSpec& y = sc.yms.at(id);
      e["lambda"] = y.lambda;
      e["atom_a"] = y.atom_a;
      e["atom_b"] = y.atom_b;
      e["gamma"] = y.gamma;
    } else if (type == "experiment") {
      for (const auto& ex : sc.experiments) {
        if (ex.id == id) {
          e["kind"] = ex.kind;
          e["params"] = ex.params;
        }
      }
    }
    j["entries"].push_back(e);
  }
  return j;
}

// Shared provenance block: residuals are reported even on pass, and reports
// with equal inputs and seed are byte-identical apart from the timestamp.
inline json provenance(std::uint64_t seed, double membership_eps, double residual_tol,
                       std::string timestamp = {}) {
  json p;
  p["tool"] = "eulerwave";
  p["version"] = kToolVersion;
  p["seed"] = seed;
  p["tolerances"]["membership_eps"] = membership_eps;
  p["tolerances"]["condition_tol"] = kConditionTol;
  p["tolerances"]["residual_tol"] = residual_tol;
  p["flux_convention"] = "atomwise";
  p["timestamp"] = timestamp;
  return p;
}

}  // namespace eulerwave
