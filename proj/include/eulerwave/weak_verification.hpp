#pragma once

// Verification of piecewise-constant fans as distributional solutions of the
// relaxed system: interface jump residuals, mollified weak-form residuals,
// and entropy-jump admissibility margins.

#include <array>
#include <vector>

#include "eulerwave/fan_construction.hpp"
#include "eulerwave/lifted_algebra.hpp"
#include "eulerwave/quadrature.hpp"

namespace eulerwave {

// A fan of three relaxed states over P-, P1, P+.
struct PiecewiseFan {
  FanPartition part;
  LiftedState zm, z1, zp;

  const LiftedState& state_at(double t, double x2) const {
    if (x2 < part.nu_minus * t) return zm;
    if (x2 > part.nu_plus * t) return zp;
    return z1;
  }
};

// Relaxed states of a fan subsolution: exact lifted outer states and the
// wedge state (rho1, rho1 u1, rho1 w1, rho1^2 + rho1 C1/2).
inline PiecewiseFan subsolution_fan(const FanSubsolution& f) {
  const ShockDatum& sd = shock_datum();
  PiecewiseFan fan;
  fan.part = {f.nu_minus, f.nu_plus};
  fan.zm = lift({sd.rho_minus, sd.u_minus}, 2.0);
  fan.zp = lift({sd.rho_plus, sd.u_plus}, 2.0);
  fan.z1.rho = f.rho1;
  fan.z1.m = f.rho1 * Vec2(f.alpha, f.beta);
  fan.z1.u11 = f.rho1 * f.gamma;
  fan.z1.u12 = f.rho1 * f.delta;
  fan.z1.q = sq(f.rho1) + f.rho1 * f.C1 / 2.0;
  return fan;
}

// Jump residuals of the relaxed system across x2 = nu t with left/right
// states (z_L, z_R) and [.] = right - left:
//   ( -nu [rho] + [m2], -nu [m1] + [U12], -nu [m2] + [-U11 + q] ).
inline Vec3 interface_residual(double nu, const LiftedState& zl, const LiftedState& zr) {
  return Vec3(-nu * (zr.rho - zl.rho) + (zr.m.y() - zl.m.y()),
              -nu * (zr.m.x() - zl.m.x()) + (zr.u12 - zl.u12),
              -nu * (zr.m.y() - zl.m.y()) + ((-zr.u11 + zr.q) - (-zl.u11 + zl.q)));
}

// Residual vectors on the two interfaces; the fan is a distributional
// solution iff both vanish.
inline std::array<Vec3, 2> rh_residual(const PiecewiseFan& fan) {
  return {interface_residual(fan.part.nu_minus, fan.zm, fan.z1),
          interface_residual(fan.part.nu_plus, fan.z1, fan.zp)};
}

namespace detail {

// Under the quadratic pressure law the energy density of a relaxed state is
// its q slot; the entropy flux through a vertical interface is (q + rho^2) u2.
inline double entropy_flux(const LiftedState& z) {
  if (z.rho <= 0.0) return 0.0;
  return (z.q + sq(z.rho)) * (z.m.y() / z.rho);
}

inline double entropy_margin(double nu, const LiftedState& zl, const LiftedState& zr) {
  return nu * (zr.q - zl.q) - (entropy_flux(zr) - entropy_flux(zl));
}

}  // namespace detail

// Slack of the admissibility inequality nu [E] >= [(E + p) u.e2] on each
// interface; nonnegative margins = admissible.
inline std::array<double, 2> entropy_jump_residual(const PiecewiseFan& fan) {
  return {detail::entropy_margin(fan.part.nu_minus, fan.zm, fan.z1),
          detail::entropy_margin(fan.part.nu_plus, fan.z1, fan.zp)};
}

// Overload with the kinetic level made explicit; rejects fans whose wedge
// state disagrees with it.
inline std::array<double, 2> entropy_jump_residual(const PiecewiseFan& fan, double C1) {
  const double q_expected = sq(fan.z1.rho) + fan.z1.rho * C1 / 2.0;
  if (std::abs(fan.z1.q - q_expected) > 1e-9 * (1.0 + std::abs(q_expected)))
    throw std::invalid_argument("entropy_jump_residual: wedge state inconsistent with C1");
  return entropy_jump_residual(fan);
}

struct SubsolutionVerdict {
  bool pass = false;
  bool rh_ok = false;
  bool strict_ok = false;
  bool entropy_ok = false;
  std::array<Vec3, 2> rh{};
  double trace_margin = 0.0;
  double det_margin = 0.0;
  std::array<double, 2> entropy{};
};

// Composite check: jump residuals vanish, the strict subsolution inequalities
// hold, the entropy margins are nonnegative.
inline SubsolutionVerdict verify_subsolution(const FanSubsolution& f,
                                             double tol = kConditionTol) {
  SubsolutionVerdict v;
  PiecewiseFan fan = subsolution_fan(f);
  v.rh = rh_residual(fan);
  double scale = 1.0 + fan.zm.to_vec().norm() + fan.z1.to_vec().norm() + fan.zp.to_vec().norm();
  v.rh_ok = v.rh[0].cwiseAbs().maxCoeff() <= tol * scale &&
            v.rh[1].cwiseAbs().maxCoeff() <= tol * scale;
  v.trace_margin = f.C1 - (sq(f.alpha) + sq(f.beta));
  v.det_margin = (f.C1 / 2.0 - sq(f.alpha) + f.gamma) * (f.C1 / 2.0 - sq(f.beta) - f.gamma) -
                 sq(f.delta - f.alpha * f.beta);
  v.strict_ok = v.trace_margin > 0.0 && v.det_margin > 0.0 && f.nu_minus < f.nu_plus;
  v.entropy = entropy_jump_residual(fan);
  double escale = 1.0 + std::abs(fan.zm.q) + std::abs(fan.z1.q) + std::abs(fan.zp.q);
  v.entropy_ok = v.entropy[0] >= -tol * escale && v.entropy[1] >= -tol * escale;
  v.pass = v.rh_ok && v.strict_ok && v.entropy_ok;
  return v;
}

// Galilean boost along x2: shifts every x2-velocity and interface speed by c.
// The wedge tensor and kinetic level transform so the strict inequalities are
// preserved.
inline FanSubsolution galilean_boost(const FanSubsolution& f, double c) {
  FanSubsolution g = f;
  g.nu_minus += c;
  g.nu_plus += c;
  g.beta += c;
  g.gamma = f.gamma - c * f.beta - c * c / 2.0;
  g.delta = f.delta + c * f.alpha;
  g.C1 = f.C1 + 2.0 * c * f.beta + c * c;
  return g;
}

// Boosted outer states are no longer the fixed shock datum, so build the fan
// directly rather than via check_conditions.
inline PiecewiseFan boosted_fan(const FanSubsolution& f, double c) {
  const ShockDatum& sd = shock_datum();
  FanSubsolution g = galilean_boost(f, c);
  PiecewiseFan fan;
  fan.part = {g.nu_minus, g.nu_plus};
  fan.zm = lift({sd.rho_minus, sd.u_minus + Vec2(0.0, c)}, 2.0);
  fan.zp = lift({sd.rho_plus, sd.u_plus + Vec2(0.0, c)}, 2.0);
  fan.z1.rho = g.rho1;
  fan.z1.m = g.rho1 * Vec2(g.alpha, g.beta);
  fan.z1.u11 = g.rho1 * g.gamma;
  fan.z1.u12 = g.rho1 * g.delta;
  fan.z1.q = sq(g.rho1) + g.rho1 * g.C1 / 2.0;
  return fan;
}

namespace detail {

// Max over bumps and rows of | integral of row . grad b | for a field whose
// capital matrix is constant per region of the line arrangement.
inline double weak_residual_over_regions(const std::vector<double>& speeds,
                                         const std::vector<Mat3>& region_matrix,
                                         const TestFunctionSet& tests) {
  double worst = 0.0;
  for (const TestBump& b : tests.bumps) {
    auto grads = bump_gradient_by_region(b, speeds, tests.resolution);
    for (int row = 0; row < 3; ++row) {
      double acc = 0.0;
      for (std::size_t r = 0; r < region_matrix.size(); ++r)
        acc += region_matrix[r](row, 0) * grads[r].x() + region_matrix[r](row, 2) * grads[r].y();
      worst = std::max(worst, std::abs(acc));
    }
  }
  return worst;
}

}  // namespace detail

// Mollified weak-form residual of the relaxed system: max over the test set
// of |integral z . (adjoint-applied test)|. Test bumps are constant in x1, so
// the x1-flux terms integrate to zero exactly.
inline double weak_form_residual(const PiecewiseFan& fan, const TestFunctionSet& tests) {
  if (!(fan.part.nu_minus < fan.part.nu_plus))
    throw std::invalid_argument("weak_form_residual: fan wedge is empty");
  std::vector<double> speeds{fan.part.nu_minus, fan.part.nu_plus};
  std::vector<Mat3> mats{capital_matrix(fan.zm), capital_matrix(fan.z1), capital_matrix(fan.zp)};
  return detail::weak_residual_over_regions(speeds, mats, tests);
}

}  // namespace eulerwave
