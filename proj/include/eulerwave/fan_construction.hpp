#pragma once

// Fan subsolutions for the fixed density-1-to-4 shock: the ten-condition
// feasibility system (six interface jump equalities, two strict
// positive-definiteness inequalities, two entropy-jump inequalities),
// the explicit baseline family, its one-parameter perturbation, feasible
// kinetic-level intervals, and the separated-pair search.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "eulerwave/common.hpp"
#include "eulerwave/lifted_algebra.hpp"

namespace eulerwave {

// The fixed shock datum: rho jumps 1 -> 4 across x2 = 0, x2-velocity jumps
// 2*sqrt(2) -> 0, and both sides share x1-velocity -1/4.
struct ShockDatum {
  double rho_minus = 1.0;
  double rho_plus = 4.0;
  Vec2 u_minus{-0.25, 2.0 * kSqrt2};
  Vec2 u_plus{-0.25, 0.0};
};

inline const ShockDatum& shock_datum() {
  static const ShockDatum d;
  return d;
}

// Piecewise-constant fan over P- = {x2 < nu_minus t}, P1 (the wedge), and
// P+ = {x2 > nu_plus t}: interface speeds, wedge density rho1, wedge
// velocity u1 = (alpha, beta), trace-free wedge tensor w1 = [[gamma, delta],
// [delta, -gamma]], and kinetic level C1.
struct FanSubsolution {
  double nu_minus = 0.0;
  double nu_plus = 0.0;
  double rho1 = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double C1 = 0.0;
};

// Time-axis wedge between two interface speeds.
struct FanPartition {
  double nu_minus = 0.0;
  double nu_plus = 0.0;
};

inline constexpr double kConditionTol = 1e-10;

// Outcome of the ten-relation check: six equality residuals (LHS - RHS),
// two strict margins (positive-definiteness), two admissibility margins
// (slack of the entropy jump inequalities; nonnegative = satisfied).
struct ConditionReport {
  std::array<double, 6> eq_residual{};
  std::array<double, 6> eq_scale{};
  std::array<double, 4> ineq_margin{};
  std::array<double, 4> ineq_scale{};
  bool overall = false;
  double tol = kConditionTol;

  static const std::array<const char*, 6>& eq_labels() {
    static const std::array<const char*, 6> l = {
        "mass jump (left interface)",     "x1-momentum jump (left interface)",
        "x2-momentum jump (left interface)", "mass jump (right interface)",
        "x1-momentum jump (right interface)", "x2-momentum jump (right interface)"};
    return l;
  }
  static const std::array<const char*, 4>& ineq_labels() {
    static const std::array<const char*, 4> l = {
        "kinetic level bound alpha^2+beta^2 < C1 (strict)",
        "positive-definiteness determinant (strict)",
        "entropy jump (left interface)",
        "entropy jump (right interface)"};
    return l;
  }

  // First failing condition, or empty when overall passes.
  std::string violated() const {
    for (int i = 0; i < 6; ++i)
      if (std::abs(eq_residual[i]) > tol * eq_scale[i]) return eq_labels()[i];
    for (int i = 0; i < 2; ++i)
      if (!(ineq_margin[i] > 0.0)) return ineq_labels()[i];
    for (int i = 2; i < 4; ++i)
      if (ineq_margin[i] < -tol * ineq_scale[i]) return ineq_labels()[i];
    return {};
  }
};

// Evaluate the ten relations for the fixed shock. Equalities are the jump
// conditions of the relaxed system on both interfaces; the admissibility
// margins are the slack of the energy jump nu [E] >= [(E + p) u.e2] with
// wedge energy rho1^2 + rho1*C1/2.
inline ConditionReport check_conditions(const FanSubsolution& f, double tol = kConditionTol) {
  for (double v : {f.nu_minus, f.nu_plus, f.rho1, f.alpha, f.beta, f.gamma, f.delta, f.C1})
    if (!std::isfinite(v)) throw std::domain_error("check_conditions: non-finite input");
  if (!(f.rho1 > 0.0)) throw std::domain_error("check_conditions: rho1 must be positive");
  if (!(f.C1 > 0.0)) throw std::domain_error("check_conditions: C1 must be positive");

  const double s2 = kSqrt2;
  const double r = f.rho1;
  ConditionReport rep;
  rep.tol = tol;

  auto set_eq = [&rep](int i, double lhs, double rhs) {
    rep.eq_residual[i] = lhs - rhs;
    rep.eq_scale[i] = 1.0 + std::abs(lhs) + std::abs(rhs);
  };
  // Left interface (outer state rho=1, u=(-1/4, 2*sqrt(2))).
  set_eq(0, f.nu_minus * (1.0 - r), 2.0 * s2 - r * f.beta);
  set_eq(1, f.nu_minus * (-0.25 - r * f.alpha), -1.0 / s2 - r * f.delta);
  set_eq(2, f.nu_minus * (2.0 * s2 - r * f.beta),
         8.0 + r * f.gamma + 1.0 - r * r - r * f.C1 / 2.0);
  // Right interface (outer state rho=4, u=(-1/4, 0)).
  set_eq(3, f.nu_plus * (r - 4.0), r * f.beta - 0.0);
  set_eq(4, f.nu_plus * (r * f.alpha - (-1.0)), r * f.delta - 0.0);
  set_eq(5, f.nu_plus * (r * f.beta - 0.0),
         -r * f.gamma - 0.0 + r * r - 16.0 + r * f.C1 / 2.0);

  // Strict subsolution inequalities: trace and determinant positivity of
  // (C1/2) I - (u1 (x) u1 - w1).
  rep.ineq_margin[0] = f.C1 - (sq(f.alpha) + sq(f.beta));
  rep.ineq_scale[0] = 1.0 + f.C1 + sq(f.alpha) + sq(f.beta);
  rep.ineq_margin[1] = (f.C1 / 2.0 - sq(f.alpha) + f.gamma) * (f.C1 / 2.0 - sq(f.beta) - f.gamma) -
                       sq(f.delta - f.alpha * f.beta);
  rep.ineq_scale[1] = 1.0 + std::abs(f.C1 / 2.0 - sq(f.alpha) + f.gamma) *
                                std::abs(f.C1 / 2.0 - sq(f.beta) - f.gamma) +
                      sq(f.delta - f.alpha * f.beta);

  // Entropy jump, left interface. |u-|^2 = 1/16 + 8.
  const double usq_minus = 1.0 / 16.0 + 8.0;
  const double lhs9 =
      f.nu_minus * (1.0 - r * r) + f.nu_minus * (usq_minus / 2.0 - r * f.C1 / 2.0);
  const double rhs9 = (1.0 + 1.0) * 2.0 * s2 - (r * r + r * r) * f.beta + s2 * usq_minus -
                      r * f.beta * f.C1 / 2.0;
  rep.ineq_margin[2] = rhs9 - lhs9;
  rep.ineq_scale[2] = 1.0 + std::abs(lhs9) + std::abs(rhs9);

  // Entropy jump, right interface. rho+ |u+|^2 / 2 = 1/8.
  const double lhs10 = f.nu_plus * (r * r - 16.0) + f.nu_plus * (r * f.C1 / 2.0 - 1.0 / 8.0);
  const double rhs10 = (r * r + r * r) * f.beta - 0.0 + r * f.beta * f.C1 / 2.0 - 0.0;
  rep.ineq_margin[3] = rhs10 - lhs10;
  rep.ineq_scale[3] = 1.0 + std::abs(lhs10) + std::abs(rhs10);

  bool ok = f.nu_minus < f.nu_plus;
  for (int i = 0; i < 6; ++i) ok = ok && std::abs(rep.eq_residual[i]) <= tol * rep.eq_scale[i];
  ok = ok && rep.ineq_margin[0] > 0.0 && rep.ineq_margin[1] > 0.0;
  ok = ok && rep.ineq_margin[2] >= -tol * rep.ineq_scale[2] &&
       rep.ineq_margin[3] >= -tol * rep.ineq_scale[3];
  rep.overall = ok;
  return rep;
}

// Explicit baseline: beta = delta = nu_plus = 0 forces
// alpha = -1/4, nu_minus = -7/(2 sqrt 2), rho1 = 15/7, gamma = C1/2 - 559/105.
inline FanSubsolution baseline_params(double C1) {
  FanSubsolution f;
  f.nu_minus = -7.0 / (2.0 * kSqrt2);
  f.nu_plus = 0.0;
  f.rho1 = 15.0 / 7.0;
  f.alpha = -0.25;
  f.beta = 0.0;
  f.gamma = C1 / 2.0 - 559.0 / 105.0;
  f.delta = 0.0;
  f.C1 = C1;
  return f;
}

inline FanSubsolution baseline_family(double C1) {
  if (!std::isfinite(C1) || !(C1 > 0.0))
    throw std::domain_error("baseline_family: C1 must be positive and finite");
  FanSubsolution f = baseline_params(C1);
  ConditionReport rep = check_conditions(f);
  if (!rep.overall)
    throw std::range_error("baseline_family: C1 infeasible, violates: " + rep.violated());
  return f;
}

inline constexpr double kEtaLowerLimit = -2.0 * kSqrt2 / 3.0;

// Closed-form perturbed family with right interface speed eta < 0. Valid for
// eta in (-2 sqrt(2)/3, 0]; at eta = 0 it reduces to the baseline.
inline FanSubsolution perturbed_params(double eta, double C1t) {
  FanSubsolution f;
  const double s2 = kSqrt2;
  f.rho1 = (15.0 + 16.0 * s2 * eta + 12.0 * eta * eta) / (7.0 + 4.0 * s2 * eta + 3.0 * eta * eta);
  f.beta = eta * (f.rho1 - 4.0) / f.rho1;
  f.delta = -0.25 * f.beta;
  f.nu_minus = -(14.0 * s2 + 29.0 * eta + 6.0 * s2 * eta * eta) / sq(3.0 * eta + 2.0 * s2);
  f.nu_plus = eta;
  f.alpha = -0.25;
  f.gamma = f.rho1 - 16.0 / f.rho1 + C1t / 2.0 - f.nu_plus * f.beta;
  f.C1 = C1t;
  return f;
}

inline FanSubsolution perturbed_family(double eta, double C1t) {
  if (!std::isfinite(eta) || !(eta > kEtaLowerLimit) || !(eta < 0.0))
    throw std::domain_error("perturbed_family: eta must lie in (-2*sqrt(2)/3, 0)");
  if (!std::isfinite(C1t) || !(C1t > 0.0))
    throw std::domain_error("perturbed_family: C1 must be positive and finite");
  FanSubsolution f = perturbed_params(eta, C1t);
  ConditionReport rep = check_conditions(f);
  if (!rep.overall)
    throw std::range_error("perturbed_family: C1 infeasible, violates: " + rep.violated());
  return f;
}

// Feasible kinetic-level interval {C1 : check_conditions passes} at fixed eta.
struct C1Interval {
  bool empty = true;
  double lo = 0.0;
  double hi = 0.0;
  bool lo_open = true;   // left endpoint excluded (a strict margin binds there)
  bool hi_closed = true; // right endpoint included (a non-strict margin binds)
};

namespace detail {

inline bool c1_feasible(double eta, double C1) {
  if (!(C1 > 0.0)) return false;
  return check_conditions(perturbed_params(eta, C1)).overall;
}

// Does a strict inequality bind (vanish) at this C1? Decides open/closed
// endpoint type.
inline bool strict_margin_binds(double eta, double C1, double eps) {
  ConditionReport rep = check_conditions(perturbed_params(eta, C1));
  for (int i = 0; i < 2; ++i)
    if (std::abs(rep.ineq_margin[i]) <= eps * rep.ineq_scale[i]) return true;
  return false;
}

}  // namespace detail

// Locate the feasible set by a 512-point scan over (0, 128] followed by
// bisection of each boundary to 1e-9. The margins are monotone in C1 at
// fixed eta, so the set is a single interval (cross-checked by the scan).
inline C1Interval admissible_c1_interval(double eta, int scan_points = 512,
                                         double bisect_tol = 1e-9) {
  if (!std::isfinite(eta) || !(eta > kEtaLowerLimit) || !(eta <= 0.0))
    throw std::domain_error("admissible_c1_interval: eta must lie in (-2*sqrt(2)/3, 0]");
  const double lo_scan = 1e-6, hi_scan = 128.0;
  std::vector<double> grid(scan_points);
  std::vector<char> pass(scan_points);
  for (int i = 0; i < scan_points; ++i) {
    grid[i] = lo_scan + (hi_scan - lo_scan) * i / (scan_points - 1);
    pass[i] = detail::c1_feasible(eta, grid[i]) ? 1 : 0;
  }
  int first = -1, last = -1;
  for (int i = 0; i < scan_points; ++i) {
    if (pass[i]) {
      if (first < 0) first = i;
      last = i;
    }
  }
  C1Interval iv;
  if (first < 0) return iv;  // empty feasible set
  for (int i = first; i <= last; ++i)
    if (!pass[i]) throw std::logic_error("admissible_c1_interval: feasible set not an interval");

  auto bisect = [&](double in, double out) {
    // invariant: `in` feasible, `out` infeasible
    while (std::abs(out - in) > bisect_tol) {
      double mid = 0.5 * (in + out);
      (detail::c1_feasible(eta, mid) ? in : out) = mid;
    }
    return 0.5 * (in + out);
  };
  iv.empty = false;
  iv.lo = (first == 0) ? grid[0] : bisect(grid[first], grid[first - 1]);
  iv.hi = (last == scan_points - 1) ? grid[last] : bisect(grid[last], grid[last + 1]);
  const double eps_bind = 1e-6;
  iv.lo_open = detail::strict_margin_binds(eta, iv.lo, eps_bind);
  iv.hi_closed = !detail::strict_margin_binds(eta, iv.hi, eps_bind);
  return iv;
}

// Separation of two subsolutions:
//   sqrt((rho1 + rho1~)(rho1 - rho1~)^2 / (rho1 rho1~)) < |sqrt(C1) - sqrt(C1~)|.
struct SeparationReport {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
};

inline SeparationReport separation_holds(const FanSubsolution& f, const FanSubsolution& g) {
  SeparationReport rep;
  rep.lhs = std::sqrt((f.rho1 + g.rho1) * sq(f.rho1 - g.rho1) / (f.rho1 * g.rho1));
  rep.rhs = std::abs(std::sqrt(f.C1) - std::sqrt(g.C1));
  rep.margin = rep.rhs - rep.lhs;
  rep.holds = rep.lhs < rep.rhs;
  return rep;
}

// Overlap of two wedges, or nullopt when they are disjoint.
inline std::optional<FanPartition> overlap_wedge(const FanSubsolution& f,
                                                 const FanSubsolution& g) {
  FanPartition w;
  w.nu_minus = std::max(f.nu_minus, g.nu_minus);
  w.nu_plus = std::min(f.nu_plus, g.nu_plus);
  if (!(w.nu_minus < w.nu_plus)) return std::nullopt;
  return w;
}

struct PairSearchConfig {
  std::vector<double> etas;
  std::vector<double> c1s;  // candidate kinetic levels for both fans
  double margin_floor = 0.0;
};

struct PairResult {
  double eta = 0.0;
  double c1 = 0.0;
  double c1_tilde = 0.0;
  FanSubsolution baseline;
  FanSubsolution perturbed;
  double separation_margin = 0.0;
  FanPartition wedge;
};

// All grid pairs (baseline(C1), perturbed(eta, C1~)) that pass the condition
// check, are separated by at least the floor, and share a wedge. Ordering is
// lexicographic in (eta index, C1 index, C1~ index).
inline std::vector<PairResult> search_pairs(const PairSearchConfig& cfg) {
  std::vector<PairResult> out;
  std::vector<std::optional<FanSubsolution>> base(cfg.c1s.size());
  for (std::size_t j = 0; j < cfg.c1s.size(); ++j) {
    FanSubsolution f = baseline_params(cfg.c1s[j]);
    if (cfg.c1s[j] > 0.0 && check_conditions(f).overall) base[j] = f;
  }
  for (double eta : cfg.etas) {
    if (!(eta > kEtaLowerLimit && eta < 0.0)) continue;
    for (std::size_t j = 0; j < cfg.c1s.size(); ++j) {
      if (!base[j]) continue;
      for (std::size_t k = 0; k < cfg.c1s.size(); ++k) {
        if (!(cfg.c1s[k] > 0.0)) continue;
        FanSubsolution g = perturbed_params(eta, cfg.c1s[k]);
        if (!check_conditions(g).overall) continue;
        SeparationReport sep = separation_holds(*base[j], g);
        if (!sep.holds || sep.margin < cfg.margin_floor) continue;
        auto wedge = overlap_wedge(*base[j], g);
        if (!wedge) continue;
        out.push_back({eta, cfg.c1s[j], cfg.c1s[k], *base[j], g, sep.margin, *wedge});
      }
    }
  }
  return out;
}

}  // namespace eulerwave
