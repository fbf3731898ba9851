#pragma once

// Report-producing drivers behind the CLI subcommands: scenario audits,
// pair searches with CSV output, and rigidity experiment runs.

#include <fstream>
#include <iomanip>
#include <sstream>

#include "eulerwave/rigidity_lab.hpp"
#include "eulerwave/scenario_io.hpp"
#include "eulerwave/young_measures.hpp"

namespace eulerwave {

struct AuditOptions {
  int bump_count = 20;
  int resolution = 256;
  std::uint64_t seed = 424242;
  double residual_tol = 1e-6;
  double theta = 0.01;
  double membership_eps = kMembershipEps;
  int grid_nt = 64, grid_nx = 64;
};

inline AtomField resolve_atom(const Scenario& sc, const std::string& id) {
  if (auto it = sc.fans.find(id); it != sc.fans.end()) return AtomField(it->second);
  return AtomField(sc.states.at(id));
}

inline const char* verdict_name(SelectionVerdict v) {
  return v == SelectionVerdict::NOT_GENERABLE ? "NOT_GENERABLE" : "INCONCLUSIVE";
}

inline const char* verdict_name(RigidityVerdict v) {
  switch (v) {
    case RigidityVerdict::OSCILLATION_OBSERVED: return "OSCILLATION_OBSERVED";
    case RigidityVerdict::RIGIDITY_CONSISTENT: return "RIGIDITY_CONSISTENT";
    default: return "DEGENERATE";
  }
}

struct AuditOutcome {
  json report;
  bool residuals_ok = true;  // drives the exit code
};

// Audit every two-atom measure in the scenario: averaged-equation residual,
// averaged entropy residual, and the wave-cone selection verdict on the
// measure's natural region.
inline AuditOutcome run_audit(const Scenario& sc, const AuditOptions& opt = {}) {
  AuditOutcome out;
  out.report["provenance"] = provenance(opt.seed, opt.membership_eps, opt.residual_tol);
  out.report["ym"] = json::array();
  for (const auto& [id, spec] : sc.yms) {
    TwoAtomYM ym;
    ym.lambda = spec.lambda;
    ym.gamma = spec.gamma;
    ym.atom_a = resolve_atom(sc, spec.atom_a);
    ym.atom_b = resolve_atom(sc, spec.atom_b);

    double span = 4.0;
    for (const AtomField* af : {&ym.atom_a, &ym.atom_b})
      if (const PiecewiseFan* f = af->fan())
        span = std::max({span, std::abs(f->part.nu_minus) + 1.0, std::abs(f->part.nu_plus) + 1.0});
    TestFunctionSet tests = random_test_set(opt.bump_count, opt.seed, span, opt.resolution);

    double mvs = mvs_residual(ym, std::nullopt, tests);
    double adm = admissibility_residual(ym, std::nullopt, tests);
    SelectionGrid grid = natural_selection_grid(ym);
    grid.nt = opt.grid_nt;
    grid.nx = opt.grid_nx;
    SelectionReport sel = selection_verdict(ym, grid, opt.theta, opt.membership_eps);

    json rep;
    rep["id"] = id;
    rep["lambda"] = spec.lambda;
    rep["mvs_residual"] = mvs;
    rep["admissibility_residual"] = adm;
    rep["selection"]["verdict"] = verdict_name(sel.verdict);
    rep["selection"]["disconnected_fraction"] = sel.disconnected_fraction;
    rep["selection"]["disconnected_measure"] = sel.disconnected_measure;
    rep["selection"]["region_area"] = sel.region_area;
    if (sel.disconnected_fraction > 0.0) {
      rep["selection"]["witness_region"] = {{"t", {sel.t_lo, sel.t_hi}},
                                            {"x2", {sel.x_lo, sel.x_hi}}};
    }
    bool ok = mvs <= opt.residual_tol && adm <= opt.residual_tol;
    rep["residuals_ok"] = ok;
    out.residuals_ok = out.residuals_ok && ok;
    out.report["ym"].push_back(rep);
  }

  out.report["experiment"] = json::array();
  for (const auto& ex : sc.experiments) {
    if (ex.kind != "rigidity") {
      out.report["experiment"].push_back({{"id", ex.id}, {"error", "unknown kind"}});
      continue;
    }
    RigidityConfig cfg;
    if (ex.params.contains("lambda")) cfg.lambda = ex.params["lambda"].get<double>();
    if (ex.params.contains("N")) cfg.N = ex.params["N"].get<int>();
    if (ex.params.contains("n_list")) cfg.n_list = ex.params["n_list"].get<std::vector<int>>();
    State a{ex.params.at("state_a")[0].get<double>(),
            Vec2(ex.params.at("state_a")[1].get<double>(), ex.params.at("state_a")[2].get<double>())};
    State b{ex.params.at("state_b")[0].get<double>(),
            Vec2(ex.params.at("state_b")[1].get<double>(), ex.params.at("state_b")[2].get<double>())};
    RigidityReport rr = rigidity_experiment(a, b, cfg);
    json rep;
    rep["id"] = ex.id;
    rep["verdict"] = verdict_name(rr.verdict);
    rep["rows"] = json::array();
    for (const auto& row : rr.rows)
      rep["rows"].push_back({{"n", row.n},
                             {"afree_residual", row.afree},
                             {"distance", row.distance},
                             {"mass_a", row.mass_a},
                             {"mass_b", row.mass_b}});
    out.report["experiment"].push_back(rep);
  }
  return out;
}

inline std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline void write_pairs_csv(std::ostream& os, const std::vector<PairResult>& rows) {
  os << "eta,C1,C1_tilde,separation_margin,wedge_lo,wedge_hi\n";
  for (const auto& r : rows) {
    os << csv_number(r.eta) << ',' << csv_number(r.c1) << ',' << csv_number(r.c1_tilde) << ','
       << csv_number(r.separation_margin) << ',' << csv_number(r.wedge.nu_minus) << ','
       << csv_number(r.wedge.nu_plus) << '\n';
  }
}

inline void write_rigidity_csv(std::ostream& os, const RigidityReport& rep) {
  os << "n,afree_residual,d_n,mass_a,mass_b\n";
  for (const auto& r : rep.rows) {
    os << r.n << ',' << csv_number(r.afree) << ',' << csv_number(r.distance) << ','
       << csv_number(r.mass_a) << ',' << csv_number(r.mass_b) << '\n';
  }
}

inline void write_histogram_csv(std::ostream& os, const EmpiricalYM& h) {
  os << "bin_center,mass\n";
  const int bins = static_cast<int>(h.param_mass.size());
  for (int b = 0; b < bins; ++b)
    os << csv_number((b + 0.5) / bins) << ',' << csv_number(h.param_mass[static_cast<std::size_t>(b)])
       << '\n';
}

}  // namespace eulerwave
