#pragma once

// Pointwise algebra of Euler states under the quadratic pressure law:
// the lift into the 8 relaxed variables (rho, m, U, q), the symmetric
// 3x3 matrix encoding a lifted state, and wave-cone membership tests
// built on its rank.

#include <optional>

#include "eulerwave/common.hpp"

namespace eulerwave {

// A pointwise compressible-flow state: density >= 0 and velocity.
struct State {
  double rho = 0.0;
  Vec2 u = Vec2::Zero();
};

// Relaxed state z = (rho, m, U, q). U is symmetric trace-free and stored
// as its two free entries; expand with u21 = u12, u22 = -u11.
struct LiftedState {
  double rho = 0.0;
  Vec2 m = Vec2::Zero();
  double u11 = 0.0;
  double u12 = 0.0;
  double q = 0.0;

  // Dense layout (rho, m1, m2, U11, U12, U21, U22, q); the two dependent
  // slots are carried so raw 8-vectors and lifted states interoperate.
  Vec8 to_vec() const {
    Vec8 z;
    z << rho, m.x(), m.y(), u11, u12, u12, -u11, q;
    return z;
  }

  static LiftedState from_vec(const Vec8& z) {
    LiftedState s;
    s.rho = z[0];
    s.m = Vec2(z[1], z[2]);
    s.u11 = z[3];
    s.u12 = z[4];
    s.q = z[7];
    return s;
  }
};

// For a state vector z the operator acts as the row-wise divergence of a
// symmetric 3x3 matrix Z with Z*xi = symbol(xi)*z for every frequency xi.
inline Mat3 capital_matrix(const Vec8& z) {
  Mat3 Z;
  Z << z[0], z[1], z[2],
       z[1], z[3] + z[7], z[4],
       z[2], z[4], -z[3] + z[7];
  return Z;
}

inline Mat3 capital_matrix(const LiftedState& z) { return capital_matrix(z.to_vec()); }

// Lift (rho, u) into the relaxed variables. In phase-space coordinates
// xi' = sqrt(rho)*u the map reads
//   (xi1, xi') -> (xi1, sqrt(xi1) xi', xi' (x) xi' - |xi'|^2/2 I, xi1^gamma + |xi'|^2/2)
// and extends continuously by zero at vacuum.
inline LiftedState lift(const State& s, double gamma) {
  if (!(s.rho >= 0.0)) throw std::domain_error("lift: density must be nonnegative");
  if (!(gamma > 1.0)) throw std::domain_error("lift: gamma must exceed 1");
  LiftedState z;
  if (s.rho == 0.0) return z;  // vacuum: zero vector, velocity ignored
  const Vec2 xi = std::sqrt(s.rho) * s.u;
  z.rho = s.rho;
  z.m = std::sqrt(s.rho) * xi;
  z.u11 = xi.x() * xi.x() - 0.5 * xi.squaredNorm();
  z.u12 = xi.x() * xi.y();
  z.q = std::pow(s.rho, gamma) + 0.5 * xi.squaredNorm();
  return z;
}

// Closed-form determinant of Z - Z~ for two lifted states, valid for the
// quadratic pressure law only:
//   det = (rho^2 - rho~^2) * ( -rho rho~ |u - u~|^2 + (rho^2 - rho~^2)(rho - rho~) ).
inline double det_factored(const State& a, const State& b) {
  const double r = a.rho, s = b.rho;
  const double du2 = (a.u - b.u).squaredNorm();
  return (r * r - s * s) * (-r * s * du2 + (r * r - s * s) * (r - s));
}

inline constexpr double kMembershipEps = 1e-9;

// zbar lies in the wave cone iff it is nonzero and its 3x3 matrix is rank
// deficient. Rank deficiency is tested as |det Z| <= eps * ||Z||_F^3, which is
// invariant under scaling of zbar.
inline bool wave_cone_member(const Vec8& zbar, double eps = kMembershipEps) {
  if (zbar.isZero(0.0)) return false;  // the cone excludes the origin
  const Mat3 Z = capital_matrix(zbar);
  const double scale = Z.norm();
  return std::abs(Z.determinant()) <= eps * scale * scale * scale;
}

inline constexpr double kKernelTol = 1e-10;

// A unit direction xi with Z(zbar) * xi = 0, i.e. the direction along which
// one-dimensional oscillations of zbar are annihilated by the operator.
// Returns nullopt when zbar is not in the cone. With a multi-dimensional
// kernel, the first column of the SVD kernel basis is returned (deterministic
// tie-break), sign-fixed so the largest component is positive.
inline std::optional<Vec3> wave_direction(const Vec8& zbar, double eps = kMembershipEps) {
  if (!wave_cone_member(zbar, eps)) return std::nullopt;
  const Mat3 Z = capital_matrix(zbar);
  Eigen::JacobiSVD<Mat3> svd(Z, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int first_kernel = 2;
  for (int i = 0; i < 3; ++i) {
    if (sv[i] <= kKernelTol + eps * sv[0]) {
      first_kernel = i;
      break;
    }
  }
  Vec3 xi = svd.matrixV().col(first_kernel);
  int imax = 0;
  xi.cwiseAbs().maxCoeff(&imax);
  if (xi[imax] < 0.0) xi = -xi;
  return xi;
}

// Connectedness verdict for a pair of states under the gamma=2 lift. The zero
// difference counts as connected and is flagged separately: the rigidity
// hypothesis needs both "difference nonzero" and "not in the cone".
struct ConnectednessReport {
  bool connected = true;
  bool difference_zero = false;
  double det = 0.0;  // det(Z - Z~), from the factored form
};

inline ConnectednessReport wave_cone_connected(const State& a, const State& b,
                                               double eps = kMembershipEps) {
  ConnectednessReport rep;
  const Vec8 za = lift(a, 2.0).to_vec();
  const Vec8 zb = lift(b, 2.0).to_vec();
  const Vec8 d = za - zb;
  rep.det = det_factored(a, b);
  const double scale = za.norm() + zb.norm();
  if (d.norm() <= 1e-12 * (1.0 + scale)) {
    rep.difference_zero = true;
    rep.connected = true;
    return rep;
  }
  rep.connected = wave_cone_member(d, eps);
  return rep;
}

}  // namespace eulerwave
