#pragma once

// The first-order constant-coefficient operator of the relaxed system on
// (t, x1, x2): its three 3x8 coefficient matrices, the symbol A(xi), and
// rank scans over frequency directions.

#include <vector>

#include "eulerwave/common.hpp"

namespace eulerwave {

// Coefficient matrices acting on z = (rho, m1, m2, U11, U12, U21, U22, q).
// The dependent slots U21, U22 carry no coefficients; symmetry and
// trace-freeness are folded into the U11/U12 columns.
inline const Mat38& coeff_t() {
  static const Mat38 A = [] {
    Mat38 M = Mat38::Zero();
    M(0, 0) = 1.0;
    M(1, 1) = 1.0;
    M(2, 2) = 1.0;
    return M;
  }();
  return A;
}

inline const Mat38& coeff_x1() {
  static const Mat38 A = [] {
    Mat38 M = Mat38::Zero();
    M(0, 1) = 1.0;
    M(1, 3) = 1.0;
    M(1, 7) = 1.0;
    M(2, 4) = 1.0;
    return M;
  }();
  return A;
}

inline const Mat38& coeff_x2() {
  static const Mat38 A = [] {
    Mat38 M = Mat38::Zero();
    M(0, 2) = 1.0;
    M(1, 4) = 1.0;
    M(2, 3) = -1.0;
    M(2, 7) = 1.0;
    return M;
  }();
  return A;
}

// A(xi) = xi_t A^t + xi_1 A^x1 + xi_2 A^x2; satisfies A(xi) z = Z(z) xi.
inline Mat38 symbol(const Vec3& xi) {
  return xi[0] * coeff_t() + xi[1] * coeff_x1() + xi[2] * coeff_x2();
}

inline int matrix_rank(const Eigen::MatrixXd& A, double rel_tol = 1e-9) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > rel_tol * sv[0]) ++r;
  return r;
}

struct RankScanResult {
  int min_rank = 0;
  int max_rank = 0;
};

// Deterministic unit-sphere sample: Fibonacci lattice for d=3, uniform angles
// for d=2, plus the canonical axes so rank drops on coordinate directions are
// always visited.
inline std::vector<Eigen::VectorXd> direction_sample(int d, int samples) {
  std::vector<Eigen::VectorXd> dirs;
  dirs.reserve(static_cast<std::size_t>(samples) + 2 * d);
  if (d == 2) {
    for (int i = 0; i < samples; ++i) {
      double a = 2.0 * kPi * i / samples;
      Eigen::VectorXd v(2);
      v << std::cos(a), std::sin(a);
      dirs.push_back(v);
    }
  } else if (d == 3) {
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    for (int i = 0; i < samples; ++i) {
      double z = 1.0 - 2.0 * (i + 0.5) / samples;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double a = 2.0 * kPi * i / golden;
      Eigen::VectorXd v(3);
      v << r * std::cos(a), r * std::sin(a), z;
      dirs.push_back(v);
    }
  } else {
    throw config_error("direction_sample: only d=2 and d=3 supported");
  }
  for (int l = 0; l < d; ++l) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
    e[l] = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  return dirs;
}

// Scan rank A(xi) over sphere directions for a generic first-order operator
// given by its coefficient matrices.
inline RankScanResult rank_scan(const std::vector<Eigen::MatrixXd>& coeffs, int samples,
                                double rel_tol = 1e-9) {
  if (samples < 1) throw std::domain_error("rank_scan: samples must be >= 1");
  const int d = static_cast<int>(coeffs.size());
  auto dirs = direction_sample(d, samples);
  std::vector<int> ranks(dirs.size(), 0);
  parallel_for(dirs.size(), [&](std::size_t i) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(coeffs[0].rows(), coeffs[0].cols());
    for (int l = 0; l < d; ++l) A += dirs[i][l] * coeffs[l];
    ranks[i] = matrix_rank(A, rel_tol);
  });
  RankScanResult res;
  res.min_rank = res.max_rank = ranks[0];
  for (int r : ranks) {
    res.min_rank = std::min(res.min_rank, r);
    res.max_rank = std::max(res.max_rank, r);
  }
  return res;
}

// Rank scan of the relaxed-system operator; must report constant rank 3.
inline RankScanResult rank_scan(int samples, double rel_tol = 1e-9) {
  return rank_scan({coeff_t(), coeff_x1(), coeff_x2()}, samples, rel_tol);
}

}  // namespace eulerwave
