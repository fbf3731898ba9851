// Command-line front end: wave-cone queries, subsolution construction and
// checks, separated-pair searches, scenario audits, and rigidity experiment
// runs. Exit codes: 0 = pass, 1 = semantic fail, 2 = input error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "eulerwave/audit.hpp"
#include "eulerwave/fan_construction.hpp"
#include "eulerwave/lifted_algebra.hpp"
#include "eulerwave/rigidity_lab.hpp"
#include "eulerwave/scenario_io.hpp"
#include "eulerwave/weak_verification.hpp"

using namespace eulerwave;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_numbers(const std::string& text, const std::string& field,
                                  std::size_t expect = 0) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (...) {
      throw input_error("field '" + field + "': cannot parse number '" + tok + "'");
    }
  }
  if (expect && out.size() != expect)
    throw input_error("field '" + field + "': expected " + std::to_string(expect) +
                      " comma-separated numbers, got " + std::to_string(out.size()));
  return out;
}

State parse_state(const std::string& text, const std::string& field) {
  auto v = parse_numbers(text, field, 3);
  return State{v[0], Vec2(v[1], v[2])};
}

void emit(const json& report, const std::string& out_path) {
  std::string text = report.dump(2);
  std::cout << text << std::endl;
  if (!out_path.empty()) {
    std::ofstream os(out_path);
    if (!os) throw input_error("cannot write report to '" + out_path + "'");
    os << text << '\n';
  }
}

json fan_json(const FanSubsolution& f) {
  return {{"nu_minus", f.nu_minus}, {"nu_plus", f.nu_plus}, {"rho1", f.rho1},
          {"alpha", f.alpha},       {"beta", f.beta},       {"gamma", f.gamma},
          {"delta", f.delta},       {"C1", f.C1}};
}

json condition_json(const ConditionReport& rep) {
  json out;
  out["pass"] = rep.overall;
  out["equalities"] = json::array();
  for (int i = 0; i < 6; ++i)
    out["equalities"].push_back(
        {{"label", ConditionReport::eq_labels()[i]}, {"residual", rep.eq_residual[i]}});
  out["inequalities"] = json::array();
  for (int i = 0; i < 4; ++i)
    out["inequalities"].push_back(
        {{"label", ConditionReport::ineq_labels()[i]}, {"margin", rep.ineq_margin[i]}});
  if (!rep.overall) out["violated"] = rep.violated();
  return out;
}

int cmd_wavecone(const std::vector<std::string>& states, const std::vector<std::string>& zbars,
                 double eps, const std::string& out_path) {
  json rep;
  rep["provenance"] = provenance(0, eps, 0.0);
  Vec8 d;
  if (states.size() == 2 && zbars.empty()) {
    State a = parse_state(states[0], "state");
    State b = parse_state(states[1], "state");
    auto conn = wave_cone_connected(a, b, eps);
    d = lift(a, 2.0).to_vec() - lift(b, 2.0).to_vec();
    rep["connected"] = conn.connected;
    rep["difference_zero"] = conn.difference_zero;
    rep["det"] = conn.det;
  } else if (states.empty() && (zbars.size() == 1 || zbars.size() == 2)) {
    auto v = parse_numbers(zbars[0], "zbar", 8);
    for (int i = 0; i < 8; ++i) d[i] = v[static_cast<std::size_t>(i)];
    if (zbars.size() == 2) {
      auto w = parse_numbers(zbars[1], "zbar", 8);
      for (int i = 0; i < 8; ++i) d[i] -= w[static_cast<std::size_t>(i)];
    }
    rep["det"] = capital_matrix(d).determinant();
  } else {
    throw input_error("wavecone needs exactly two --state entries or one/two --zbar entries");
  }
  rep["member"] = wave_cone_member(d, eps);
  if (auto xi = wave_direction(d, eps)) rep["wave_direction"] = {(*xi)[0], (*xi)[1], (*xi)[2]};
  emit(rep, out_path);
  return kExitPass;
}

int cmd_audit(const std::string& path, const AuditOptions& opt, const std::string& out_path) {
  std::ifstream is(path);
  if (!is) throw input_error("cannot open scenario '" + path + "'");
  std::stringstream buf;
  buf << is.rdbuf();
  Scenario sc = parse_scenario_text(buf.str());
  AuditOutcome out = run_audit(sc, opt);
  emit(out.report, out_path);
  return out.residuals_ok ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lifted-state wave-cone and fan-subsolution toolkit"};
  app.require_subcommand(1);

  std::string out_path;
  double membership_eps = kMembershipEps;
  app.add_option("--out", out_path, "also write the report/CSV to this path");
  app.add_option("--eps-membership", membership_eps, "wave-cone rank tolerance");

  // wavecone
  auto* wc = app.add_subcommand("wavecone", "wave-cone membership / connectedness");
  std::vector<std::string> wc_states, wc_zbars;
  wc->add_option("--state", wc_states, "state as rho,ux,uy (give twice)");
  wc->add_option("--zbar", wc_zbars, "raw 8-vector (once, or twice for a difference)");

  // subsolution
  auto* sub = app.add_subcommand("subsolution", "construct and check fan subsolutions");
  sub->require_subcommand(1);
  auto* sub_check = sub->add_subcommand("check", "check explicit parameters");
  FanSubsolution raw;
  sub_check->add_option("--nu-minus", raw.nu_minus)->required();
  sub_check->add_option("--nu-plus", raw.nu_plus)->required();
  sub_check->add_option("--rho1", raw.rho1)->required();
  sub_check->add_option("--alpha", raw.alpha)->required();
  sub_check->add_option("--beta", raw.beta)->required();
  sub_check->add_option("--gamma", raw.gamma)->required();
  sub_check->add_option("--delta", raw.delta)->required();
  sub_check->add_option("--c1", raw.C1)->required();
  auto* sub_base = sub->add_subcommand("baseline", "explicit baseline family");
  double base_c1 = 6.0;
  bool base_check = false;
  sub_base->add_option("--c1", base_c1)->required();
  sub_base->add_flag("--check", base_check, "run the condition check and gate the exit code");
  auto* sub_pert = sub->add_subcommand("perturb", "perturbed family");
  double pert_eta = -0.001, pert_c1 = 5.8;
  bool pert_check = false;
  sub_pert->add_option("--eta", pert_eta)->required();
  sub_pert->add_option("--c1", pert_c1)->required();
  sub_pert->add_flag("--check", pert_check);
  auto* sub_iv = sub->add_subcommand("interval", "feasible kinetic-level interval");
  double iv_eta = 0.0;
  sub_iv->add_option("--eta", iv_eta)->required();

  // pairsearch
  auto* ps = app.add_subcommand("pairsearch", "grid search for separated subsolution pairs");
  std::string ps_etas, ps_c1s;
  double ps_floor = 0.0;
  ps->add_option("--eta", ps_etas, "comma-separated eta grid")->required();
  ps->add_option("--c1", ps_c1s, "comma-separated kinetic-level grid")->required();
  ps->add_option("--floor", ps_floor, "separation margin floor");

  // audit
  auto* au = app.add_subcommand("audit", "audit a scenario file");
  std::string audit_path;
  AuditOptions audit_opt;
  au->add_option("scenario", audit_path, "scenario JSON path")->required();
  au->add_option("--seed", audit_opt.seed);
  au->add_option("--bumps", audit_opt.bump_count);
  au->add_option("--resolution", audit_opt.resolution);
  au->add_option("--tol", audit_opt.residual_tol);
  au->add_option("--theta", audit_opt.theta);

  // rigidity
  auto* rg = app.add_subcommand("rigidity", "two-valued oscillation/rigidity experiment");
  std::string rg_a, rg_b, rg_nlist = "1,2,4,8";
  double rg_lambda = 0.5;
  int rg_N = 256;
  rg->add_option("--state-a", rg_a, "rho,ux,uy")->required();
  rg->add_option("--state-b", rg_b, "rho,ux,uy")->required();
  rg->add_option("--lambda", rg_lambda);
  rg->add_option("--n-list", rg_nlist, "comma-separated oscillation frequencies");
  rg->add_option("--grid", rg_N, "nodes per axis (power of two)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "input error: " << e.what() << std::endl;
    return kExitInput;
  }

  try {
    audit_opt.membership_eps = membership_eps;
    if (wc->parsed()) return cmd_wavecone(wc_states, wc_zbars, membership_eps, out_path);

    if (sub->parsed()) {
      json rep;
      rep["provenance"] = provenance(0, membership_eps, 0.0);
      if (sub_check->parsed()) {
        ConditionReport cr = check_conditions(raw);
        rep["fan"] = fan_json(raw);
        rep["conditions"] = condition_json(cr);
        emit(rep, out_path);
        return cr.overall ? kExitPass : kExitFail;
      }
      if (sub_base->parsed() || sub_pert->parsed()) {
        FanSubsolution f = sub_base->parsed() ? baseline_params(base_c1)
                                              : perturbed_params(pert_eta, pert_c1);
        if (sub_pert->parsed() &&
            !(pert_eta > kEtaLowerLimit && pert_eta < 0.0))
          throw std::domain_error("perturb: eta must lie in (-2*sqrt(2)/3, 0)");
        ConditionReport cr = check_conditions(f);
        rep["fan"] = fan_json(f);
        rep["conditions"] = condition_json(cr);
        emit(rep, out_path);
        bool gate = sub_base->parsed() ? base_check : pert_check;
        return (!gate || cr.overall) ? kExitPass : kExitFail;
      }
      // interval
      C1Interval iv = admissible_c1_interval(iv_eta);
      rep["eta"] = iv_eta;
      rep["empty"] = iv.empty;
      if (!iv.empty) {
        rep["lo"] = iv.lo;
        rep["hi"] = iv.hi;
        rep["lo_open"] = iv.lo_open;
        rep["hi_closed"] = iv.hi_closed;
        std::cout << "C1 in " << (iv.lo_open ? '(' : '[') << std::setprecision(10) << iv.lo
                  << ", " << iv.hi << (iv.hi_closed ? ']' : ')') << std::endl;
      }
      emit(rep, out_path);
      return kExitPass;
    }

    if (ps->parsed()) {
      PairSearchConfig cfg;
      cfg.etas = parse_numbers(ps_etas, "eta");
      cfg.c1s = parse_numbers(ps_c1s, "c1");
      cfg.margin_floor = ps_floor;
      auto rows = search_pairs(cfg);
      if (!out_path.empty()) {
        std::ofstream os(out_path);
        if (!os) throw input_error("cannot write CSV to '" + out_path + "'");
        write_pairs_csv(os, rows);
      } else {
        write_pairs_csv(std::cout, rows);
      }
      json rep;
      rep["pairs_found"] = rows.size();
      std::cerr << "pairs found: " << rows.size() << std::endl;
      return kExitPass;
    }

    if (au->parsed()) return cmd_audit(audit_path, audit_opt, out_path);

    if (rg->parsed()) {
      RigidityConfig cfg;
      cfg.lambda = rg_lambda;
      cfg.N = rg_N;
      cfg.n_list.clear();
      for (double v : parse_numbers(rg_nlist, "n-list")) {
        if (v < 1.0 || v != std::floor(v))
          throw input_error("field 'n-list': frequencies must be positive integers");
        cfg.n_list.push_back(static_cast<int>(v));
      }
      RigidityReport rr = rigidity_experiment(parse_state(rg_a, "state-a"),
                                              parse_state(rg_b, "state-b"), cfg);
      json rep;
      rep["provenance"] = provenance(0, membership_eps, 0.0);
      rep["verdict"] = verdict_name(rr.verdict);
      rep["pair_connected"] = rr.pair_connected;
      rep["rows"] = json::array();
      for (const auto& row : rr.rows)
        rep["rows"].push_back({{"n", row.n},
                               {"afree_residual", row.afree},
                               {"distance", row.distance},
                               {"mass_a", row.mass_a},
                               {"mass_b", row.mass_b}});
      std::cout << rep.dump(2) << std::endl;
      if (!out_path.empty()) {
        std::ofstream os(out_path);
        if (!os) throw input_error("cannot write CSV to '" + out_path + "'");
        write_rigidity_csv(os, rr);
      }
      return kExitPass;
    }
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << std::endl;
    return kExitInput;
  } catch (const scenario_error& e) {
    std::cerr << "input error: " << e.what() << std::endl;
    return kExitInput;
  } catch (const config_error& e) {
    std::cerr << "configuration error: " << e.what() << std::endl;
    return kExitInput;
  } catch (const std::domain_error& e) {
    std::cerr << "input error: " << e.what() << std::endl;
    return kExitInput;
  } catch (const std::range_error& e) {
    std::cerr << "infeasible: " << e.what() << std::endl;
    return kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitFail;
  }
  return kExitInput;
}
