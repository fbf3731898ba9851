#pragma once

// Two-atom (generalized) Young measures over state or fan-valued atom fields:
// moment fields, weak-form residuals of the averaged equations, the averaged
// entropy inequality, and the wave-cone selection verdict.

#include <optional>
#include <variant>
#include <vector>

#include "eulerwave/fan_construction.hpp"
#include "eulerwave/lifted_algebra.hpp"
#include "eulerwave/quadrature.hpp"
#include "eulerwave/weak_verification.hpp"

namespace eulerwave {

// An atom field assigns a relaxed state to every point: either a constant
// flow state (lifted on demand) or a fan subsolution (wedge states carry the
// inflated kinetic level through their q slot).
class AtomField {
 public:
  AtomField() : data_(State{}) {}
  explicit AtomField(const State& s) : data_(s) {}
  explicit AtomField(const FanSubsolution& f) : data_(subsolution_fan(f)) {}
  explicit AtomField(const PiecewiseFan& fan) : data_(fan) {}

  bool is_fan() const { return std::holds_alternative<PiecewiseFan>(data_); }
  const PiecewiseFan* fan() const { return std::get_if<PiecewiseFan>(&data_); }

  LiftedState at(double t, double x2, double gamma) const {
    if (const State* s = std::get_if<State>(&data_)) return lift(*s, gamma);
    return std::get<PiecewiseFan>(data_).state_at(t, x2);
  }

 private:
  std::variant<State, PiecewiseFan> data_;
};

struct TwoAtomYM {
  double lambda = 0.5;  // mass of atom_a, in (0, 1)
  AtomField atom_a, atom_b;
  double gamma = 2.0;
};

// Atoms of the angular measure live on the generalized sphere
// |beta1|^(2 gamma) + |beta'|^4 = 1 with beta1 >= 0.
struct SphereAtom {
  double beta1 = 1.0;
  Vec2 betap = Vec2::Zero();
  double weight = 1.0;
};

inline void validate_sphere_atom(const SphereAtom& a, double gamma, double tol = 1e-12) {
  if (a.beta1 < 0.0) throw std::domain_error("sphere atom: beta1 must be nonnegative");
  const double r = std::pow(std::abs(a.beta1), 2.0 * gamma) + std::pow(a.betap.norm(), 4.0);
  if (std::abs(r - 1.0) > tol)
    throw std::domain_error("sphere atom: |beta1|^(2 gamma) + |beta'|^4 must equal 1");
}

// Concentration: a nonnegative weight field on a (t, x2) grid together with
// sphere atoms whose weights sum to 1.
struct ConcentrationPart {
  double t0 = 0.0, t1 = 1.0, x0 = -1.0, x1 = 1.0;
  int nt = 1, nx = 1;
  std::vector<double> weight{0.0};  // row-major nt x nx
  std::vector<SphereAtom> atoms;

  double weight_at(double t, double x) const {
    if (t < t0 || t > t1 || x < x0 || x > x1) return 0.0;
    int it = std::min(nt - 1, static_cast<int>((t - t0) / (t1 - t0) * nt));
    int ix = std::min(nx - 1, static_cast<int>((x - x0) / (x1 - x0) * nx));
    return weight[static_cast<std::size_t>(it) * static_cast<std::size_t>(nx) +
                  static_cast<std::size_t>(ix)];
  }
};

inline void validate_concentration(const ConcentrationPart& c, double gamma) {
  for (double w : c.weight)
    if (!(w >= 0.0)) throw std::domain_error("concentration weight must be nonnegative");
  bool any_positive = false;
  for (double w : c.weight) any_positive = any_positive || w > 0.0;
  if (any_positive) {
    double total = 0.0;
    for (const auto& a : c.atoms) {
      validate_sphere_atom(a, gamma);
      if (!(a.weight >= 0.0)) throw std::domain_error("sphere atom weight must be nonnegative");
      total += a.weight;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw std::domain_error("sphere atom weights must sum to 1 where the field is positive");
  }
}

// Point values of the moment fields of Def.-style averaged quantities.
struct MomentFields {
  double rho_bar = 0.0;
  Vec2 rho_u_bar = Vec2::Zero();
  Mat2 rho_uu_bar = Mat2::Zero();
  double p_rho_bar = 0.0;
  double rho_usq_bar = 0.0;
};

namespace detail {

// Per-atom contributions read off the lifted state: the momentum-flux tensor
// is U + (q - rho^gamma) I and its trace is the kinetic moment.
struct AtomMoments {
  double rho = 0.0;
  Vec2 rho_u = Vec2::Zero();
  Mat2 rho_uu = Mat2::Zero();
  double p = 0.0;
  double rho_usq = 0.0;
};

inline AtomMoments atom_moments(const LiftedState& z, double gamma) {
  AtomMoments m;
  m.rho = z.rho;
  m.rho_u = z.m;
  m.p = std::pow(z.rho, gamma);
  const double kin = z.q - m.p;  // rho |u|^2 / 2 at exact lifts, rho C1 / 2 on wedges
  m.rho_uu << z.u11 + kin, z.u12, z.u12, -z.u11 + kin;
  m.rho_usq = 2.0 * kin;
  return m;
}

}  // namespace detail

inline MomentFields moments(const TwoAtomYM& ym, const std::optional<ConcentrationPart>& conc,
                            double t, double x2) {
  // permit the degenerate endpoints here so limits are testable; the strict
  // mixture requirement is enforced where the selection criterion needs it
  if (!(ym.lambda >= 0.0 && ym.lambda <= 1.0))
    throw std::domain_error("two-atom measure requires lambda in [0,1]");
  const auto a = detail::atom_moments(ym.atom_a.at(t, x2, ym.gamma), ym.gamma);
  const auto b = detail::atom_moments(ym.atom_b.at(t, x2, ym.gamma), ym.gamma);
  const double l = ym.lambda;
  MomentFields m;
  m.rho_bar = l * a.rho + (1 - l) * b.rho;
  m.rho_u_bar = l * a.rho_u + (1 - l) * b.rho_u;
  m.rho_uu_bar = l * a.rho_uu + (1 - l) * b.rho_uu;
  m.p_rho_bar = l * a.p + (1 - l) * b.p;
  m.rho_usq_bar = l * a.rho_usq + (1 - l) * b.rho_usq;
  if (conc) {
    const double w = conc->weight_at(t, x2);
    if (w > 0.0) {
      for (const auto& atom : conc->atoms) {
        m.rho_uu_bar += w * atom.weight * (atom.betap * atom.betap.transpose());
        m.p_rho_bar += w * atom.weight * std::pow(atom.beta1, ym.gamma);
        m.rho_usq_bar += w * atom.weight * atom.betap.squaredNorm();
      }
    }
  }
  return m;
}

namespace detail {

// Interface speeds of the union arrangement of the atoms' fans, sorted and
// deduplicated; constants have no interfaces.
inline std::vector<double> arrangement_speeds(const TwoAtomYM& ym) {
  std::vector<double> s;
  for (const AtomField* af : {&ym.atom_a, &ym.atom_b}) {
    if (const PiecewiseFan* f = af->fan()) {
      s.push_back(f->part.nu_minus);
      s.push_back(f->part.nu_plus);
    }
  }
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end(),
                      [](double a, double b) { return std::abs(a - b) <= 1e-14; }),
          s.end());
  return s;
}

// A point inside region r of the arrangement at t = 1.
inline double region_probe(const std::vector<double>& speeds, std::size_t r) {
  if (speeds.empty()) return 0.0;
  if (r == 0) return speeds.front() - 1.0;
  if (r == speeds.size()) return speeds.back() + 1.0;
  return 0.5 * (speeds[r - 1] + speeds[r]);
}

}  // namespace detail

// Max weak-form residual of the averaged mass/momentum equations over the
// test set. Moment fields built from fans are constant on the arrangement
// regions, so the clipped quadrature engine applies unchanged.
inline double mvs_residual(const TwoAtomYM& ym, const std::optional<ConcentrationPart>& conc,
                           const TestFunctionSet& tests) {
  if (conc) validate_concentration(*conc, ym.gamma);
  auto speeds = detail::arrangement_speeds(ym);
  const std::size_t R = speeds.size() + 1;
  double worst = 0.0;
  for (const TestBump& bump : tests.bumps) {
    std::vector<Mat3> mats(R);
    for (std::size_t r = 0; r < R; ++r) {
      // concentration weights vary per bump support; sample at the bump center
      const double x_probe = detail::region_probe(speeds, r) * bump.ct;
      MomentFields m = moments(ym, conc, bump.ct, x_probe);
      mats[r] << m.rho_bar, m.rho_u_bar.x(), m.rho_u_bar.y(),
          m.rho_u_bar.x(), m.rho_uu_bar(0, 0) + m.p_rho_bar, m.rho_uu_bar(0, 1),
          m.rho_u_bar.y(), m.rho_uu_bar(1, 0), m.rho_uu_bar(1, 1) + m.p_rho_bar;
    }
    TestFunctionSet one;
    one.bumps = {bump};
    one.resolution = tests.resolution;
    worst = std::max(worst, detail::weak_residual_over_regions(speeds, mats, one));
  }
  return worst;
}

// Most-positive value of the averaged entropy weak form over nonnegative test
// bumps; at most the quadrature tolerance means admissible. The flux is the
// lambda-weighted sum of each atom's (E + p) u . e2.
inline double admissibility_residual(const TwoAtomYM& ym,
                                     const std::optional<ConcentrationPart>& conc,
                                     const TestFunctionSet& tests) {
  if (conc) validate_concentration(*conc, ym.gamma);
  auto speeds = detail::arrangement_speeds(ym);
  const std::size_t R = speeds.size() + 1;
  double worst = -std::numeric_limits<double>::infinity();
  for (const TestBump& bump : tests.bumps) {
    if (!bump.nonnegative())
      throw std::invalid_argument("admissibility_residual: test bumps must be nonnegative");
    std::vector<double> energy(R), flux(R);
    for (std::size_t r = 0; r < R; ++r) {
      const double x_probe = detail::region_probe(speeds, r) * bump.ct;
      MomentFields m = moments(ym, conc, bump.ct, x_probe);
      energy[r] = 0.5 * m.rho_usq_bar + m.p_rho_bar;
      double q = 0.0;
      for (const AtomField* af : {&ym.atom_a, &ym.atom_b}) {
        const double w = (af == &ym.atom_a) ? ym.lambda : 1.0 - ym.lambda;
        LiftedState z = af->at(bump.ct, x_probe, ym.gamma);
        if (z.rho > 0.0) q += w * (z.q + std::pow(z.rho, ym.gamma)) * (z.m.y() / z.rho);
      }
      flux[r] = q;
    }
    auto grads = bump_gradient_by_region(bump, speeds, tests.resolution);
    double acc = 0.0;
    for (std::size_t r = 0; r < R; ++r)
      acc -= energy[r] * grads[r].x() + flux[r] * grads[r].y();
    worst = std::max(worst, acc);
  }
  return worst;
}

enum class SelectionVerdict { NOT_GENERABLE, INCONCLUSIVE };

struct SelectionReport {
  SelectionVerdict verdict = SelectionVerdict::INCONCLUSIVE;
  double disconnected_fraction = 0.0;
  double disconnected_measure = 0.0;
  double region_area = 0.0;
  // bounding box of the witnessing samples (t, x2), valid when fraction > 0
  double t_lo = 0.0, t_hi = 0.0, x_lo = 0.0, x_hi = 0.0;
};

struct SelectionGrid {
  double t0 = 1e-3, t1 = 1.0;
  double x0 = -4.0, x1 = 4.0;
  int nt = 64, nx = 64;
  bool wedge_adapted = false;  // sample x2 between wedge speeds scaled by t
};

// Natural sampling region of a measure: the overlap wedge when both atoms are
// fans with intersecting wedges, otherwise a default box.
inline SelectionGrid natural_selection_grid(const TwoAtomYM& ym) {
  SelectionGrid g;
  const PiecewiseFan* fa = ym.atom_a.fan();
  const PiecewiseFan* fb = ym.atom_b.fan();
  if (fa && fb) {
    double lo = std::max(fa->part.nu_minus, fb->part.nu_minus);
    double hi = std::min(fa->part.nu_plus, fb->part.nu_plus);
    if (lo < hi) {
      g.wedge_adapted = true;
      g.x0 = lo;
      g.x1 = hi;  // interpreted as speeds; x2 = speed * t
    }
  }
  return g;
}

inline double grid_area(const SelectionGrid& g) {
  if (g.wedge_adapted)  // wedge between x2 = x0 t and x2 = x1 t over [t0, t1]
    return 0.5 * (g.x1 - g.x0) * (g.t1 * g.t1 - g.t0 * g.t0);
  return (g.t1 - g.t0) * (g.x1 - g.x0);
}

// Samples the grid and tests at every point whether the atoms' lifts differ
// and fail to be wave-cone connected. The verdict compares the estimated
// disconnected measure against theta times the area of the measure's natural
// region, so enlarging the sampled region never flips NOT_GENERABLE back.
inline SelectionReport selection_verdict(const TwoAtomYM& ym, const SelectionGrid& grid,
                                         double theta = 0.01, double eps = kMembershipEps) {
  if (!(ym.lambda > 0.0 && ym.lambda < 1.0))
    throw std::domain_error("selection_verdict: lambda must lie in (0,1)");
  SelectionReport rep;
  rep.region_area = grid_area(grid);
  long bad = 0, total = 0;
  bool first = true;
  for (int i = 0; i < grid.nt; ++i) {
    double t = grid.t0 + (grid.t1 - grid.t0) * (i + 0.5) / grid.nt;
    for (int j = 0; j < grid.nx; ++j) {
      double s = grid.x0 + (grid.x1 - grid.x0) * (j + 0.5) / grid.nx;
      double x2 = grid.wedge_adapted ? s * t : s;
      Vec8 za = ym.atom_a.at(t, x2, ym.gamma).to_vec();
      Vec8 zb = ym.atom_b.at(t, x2, ym.gamma).to_vec();
      Vec8 d = za - zb;
      ++total;
      bool zero = d.norm() <= 1e-12 * (1.0 + za.norm() + zb.norm());
      if (!zero && !wave_cone_member(d, eps)) {
        ++bad;
        if (first) {
          rep.t_lo = rep.t_hi = t;
          rep.x_lo = rep.x_hi = x2;
          first = false;
        } else {
          rep.t_lo = std::min(rep.t_lo, t);
          rep.t_hi = std::max(rep.t_hi, t);
          rep.x_lo = std::min(rep.x_lo, x2);
          rep.x_hi = std::max(rep.x_hi, x2);
        }
      }
    }
  }
  rep.disconnected_fraction = total ? static_cast<double>(bad) / static_cast<double>(total) : 0.0;
  rep.disconnected_measure = rep.disconnected_fraction * rep.region_area;
  const double floor_measure = theta * grid_area(natural_selection_grid(ym));
  rep.verdict = (bad > 0 && rep.disconnected_measure >= floor_measure)
                    ? SelectionVerdict::NOT_GENERABLE
                    : SelectionVerdict::INCONCLUSIVE;
  return rep;
}

}  // namespace eulerwave
