#pragma once

// Torus laboratory for the operator: periodic 8-component fields on a
// (t, x1, x2) lattice (or its (t, x2) slice), laminates along wave
// directions, the spectral free-field residual and projector, empirical
// Young measures of field values, and the oscillation-vs-rigidity
// experiment.

#include <algorithm>
#include <optional>
#include <vector>

#include "eulerwave/fft.hpp"
#include "eulerwave/lifted_algebra.hpp"
#include "eulerwave/symbol.hpp"

namespace eulerwave {

// Periodic grid over [-pi, pi)^dims with an 8-vector per node. dims = 3 is
// the full (t, x1, x2) torus; dims = 2 is the (t, x2) slice used when fields
// vary only along directions with no x1 component.
class TorusField {
 public:
  TorusField(int dims, int N) : dims_(dims), N_(N) {
    if (dims != 2 && dims != 3) throw config_error("TorusField: dims must be 2 or 3");
    if (!is_pow2(N) || N < 2) throw config_error("TorusField: N must be a power of two >= 2");
    std::size_t total = 1;
    for (int d = 0; d < dims; ++d) total *= static_cast<std::size_t>(N);
    data_.assign(total * 8, 0.0);
  }

  int dims() const { return dims_; }
  int N() const { return N_; }
  std::size_t nodes() const { return data_.size() / 8; }

  double* node(std::size_t i) { return &data_[i * 8]; }
  const double* node(std::size_t i) const { return &data_[i * 8]; }

  Vec8 value(std::size_t i) const {
    Vec8 z;
    for (int c = 0; c < 8; ++c) z[c] = data_[i * 8 + static_cast<std::size_t>(c)];
    return z;
  }
  void set_value(std::size_t i, const Vec8& z) {
    for (int c = 0; c < 8; ++c) data_[i * 8 + static_cast<std::size_t>(c)] = z[c];
  }

  // node angles theta in [-pi, pi)^dims, row-major (last axis fastest)
  void angles(std::size_t i, double* theta) const {
    std::size_t rem = i;
    for (int d = dims_ - 1; d >= 0; --d) {
      std::size_t k = rem % static_cast<std::size_t>(N_);
      rem /= static_cast<std::size_t>(N_);
      theta[d] = -kPi + 2.0 * kPi * static_cast<double>(k) / N_;
    }
  }

  // integer frequency vector in full (t, x1, x2) coordinates for node i of
  // the spectral grid (the 2-D slice embeds with zero x1 frequency)
  Vec3 frequency(std::size_t i) const {
    std::size_t rem = i;
    int k[3] = {0, 0, 0};
    for (int d = dims_ - 1; d >= 0; --d) {
      k[d] = freq_of_index(rem % static_cast<std::size_t>(N_), static_cast<std::size_t>(N_));
      rem /= static_cast<std::size_t>(N_);
    }
    if (dims_ == 2) return Vec3(k[0], 0.0, k[1]);
    return Vec3(k[0], k[1], k[2]);
  }

  Vec8 mean() const {
    Vec8 m = Vec8::Zero();
    for (std::size_t i = 0; i < nodes(); ++i) m += value(i);
    return m / static_cast<double>(nodes());
  }

 private:
  int dims_;
  int N_;
  std::vector<double> data_;
};

namespace detail {

inline std::vector<std::vector<cplx>> spectrum(const TorusField& f) {
  std::vector<std::vector<cplx>> hat(8, std::vector<cplx>(f.nodes()));
  for (int c = 0; c < 8; ++c) {
    for (std::size_t i = 0; i < f.nodes(); ++i) hat[static_cast<std::size_t>(c)][i] = f.node(i)[c];
    fft_nd(hat[static_cast<std::size_t>(c)], f.dims(), static_cast<std::size_t>(f.N()), -1);
  }
  return hat;
}

}  // namespace detail

// Normalized spectral residual of the constraint: the l2 aggregate over
// nonzero frequencies of ||A(k/|k|) z_hat(k)||, divided by the field's l2
// norm. Zero (up to roundoff) iff the field is a distributionally free field
// of the operator on the torus.
inline double afree_residual(const TorusField& f) {
  auto hat = detail::spectrum(f);
  const std::size_t n = f.nodes();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Vec3 k = f.frequency(i);
    double knorm = k.norm();
    double node_sq = 0.0;
    for (int c = 0; c < 8; ++c) node_sq += std::norm(hat[static_cast<std::size_t>(c)][i]);
    den += node_sq;
    if (knorm == 0.0) continue;
    Mat38 A = symbol(k / knorm);
    for (int row = 0; row < 3; ++row) {
      cplx acc(0.0, 0.0);
      for (int c = 0; c < 8; ++c) acc += A(row, c) * hat[static_cast<std::size_t>(c)][i];
      num += std::norm(acc);
    }
  }
  if (den == 0.0) return 0.0;
  return std::sqrt(num / den);
}

// Per-frequency orthogonal projection onto ker A(k); the zero frequency (the
// mean) is untouched. Requires the constant-rank property, which holds for
// this operator (rank 3 away from zero).
inline TorusField afree_projection(const TorusField& f) {
  auto hat = detail::spectrum(f);
  const std::size_t n = f.nodes();
  parallel_for(n, [&](std::size_t i) {
    Vec3 k = f.frequency(i);
    double knorm = k.norm();
    if (knorm == 0.0) return;
    Mat38 A = symbol(k / knorm);
    Mat3 G = A * A.transpose();
    Eigen::LDLT<Mat3> ldlt(G);
    if (ldlt.info() != Eigen::Success)
      throw std::logic_error("afree_projection: singular symbol normal matrix");
    Eigen::Matrix<cplx, 8, 1> zh;
    for (int c = 0; c < 8; ++c) zh[c] = hat[static_cast<std::size_t>(c)][i];
    Eigen::Matrix<cplx, 3, 1> Az = A.cast<cplx>() * zh;
    Eigen::Matrix<cplx, 3, 1> sol;
    // solve G sol = Az on real and imaginary parts separately
    Vec3 re = ldlt.solve(Az.real());
    Vec3 im = ldlt.solve(Az.imag());
    for (int r = 0; r < 3; ++r) sol[r] = cplx(re[r], im[r]);
    zh -= A.transpose().cast<cplx>() * sol;
    for (int c = 0; c < 8; ++c) hat[static_cast<std::size_t>(c)][i] = zh[c];
  });
  TorusField out(f.dims(), f.N());
  for (int c = 0; c < 8; ++c) {
    fft_nd(hat[static_cast<std::size_t>(c)], f.dims(), static_cast<std::size_t>(f.N()), +1);
    for (std::size_t i = 0; i < n; ++i) out.node(i)[c] = hat[static_cast<std::size_t>(c)][i].real();
  }
  return out;
}

enum class laminate_profile { exact, smoothed };

namespace detail {

// Smallest integer lattice vector aligned with xi, or nullopt.
inline std::optional<Vec3> snap_to_lattice(const Vec3& xi, int max_coeff = 8,
                                           double align_tol = 1e-9) {
  Vec3 unit = xi.normalized();
  std::optional<Vec3> best;
  double best_len = 0.0;
  for (int a = -max_coeff; a <= max_coeff; ++a)
    for (int b = -max_coeff; b <= max_coeff; ++b)
      for (int c = -max_coeff; c <= max_coeff; ++c) {
        Vec3 q(a, b, c);
        double len = q.norm();
        if (len == 0.0) continue;
        if (std::abs(std::abs(q.dot(unit)) / len - 1.0) > align_tol) continue;
        if (!best || len < best_len) {
          best = q;
          best_len = len;
        }
      }
  if (best && best->dot(unit) < 0.0) best =
      std::optional<Vec3>(-*best);
  return best;
}

// Periodic indicator of the interval [lambda, 1) on the unit circle, so its
// mean is 1 - lambda. The smoothed variant replaces both jumps with cosine
// ramps of the given width; the ramps are symmetric, so the mean is kept.
inline double indicator(double u, double lambda, double ramp) {
  u -= std::floor(u);
  if (ramp <= 0.0) return u >= lambda ? 1.0 : 0.0;
  ramp = std::min(ramp, 0.49 * std::min(std::max(lambda, 1e-12), std::max(1.0 - lambda, 1e-12)));
  auto step = [&](double d) {  // 0 -> 1 over [-ramp/2, ramp/2]
    double s = std::clamp(d / ramp + 0.5, 0.0, 1.0);
    return 0.5 - 0.5 * std::cos(kPi * s);
  };
  double chi = 0.0;
  for (int k = -1; k <= 1; ++k) chi += step(u + k - lambda) - step(u + k - 1.0);
  return std::clamp(chi, 0.0, 1.0);
}

}  // namespace detail

struct LaminateOptions {
  laminate_profile profile = laminate_profile::exact;
  std::optional<Vec3> direction;  // override; otherwise the wave direction
  int dims = 3;
};

// Two-valued oscillation between za and zb along the pair's wave direction:
// field(x) = za + chi(n * q.theta) (zb - za) with chi of mean (1 - lambda),
// so the spatial mean is lambda za + (1 - lambda) zb. The direction must be
// a lattice direction for the field to be periodic.
inline TorusField laminate(const Vec8& za, const Vec8& zb, double lambda, int n, int N,
                           const LaminateOptions& opt = {}) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::domain_error("laminate: lambda must lie in [0,1]");
  if (n < 1) throw std::domain_error("laminate: frequency must be >= 1");
  Vec3 dir;
  if (opt.direction) {
    dir = *opt.direction;
  } else {
    const Vec8 d = zb - za;
    auto xi = wave_direction(d);
    if (!xi) throw std::domain_error("laminate: difference is not in the wave cone");
    dir = *xi;
  }
  auto q = detail::snap_to_lattice(dir);
  if (!q) throw config_error("laminate: direction is not commensurate with the grid");
  if (opt.dims == 2 && std::abs((*q)[1]) > 0.0)
    throw config_error("laminate: slice mode requires a direction with no x1 component");

  TorusField f(opt.dims, N);
  const Vec8 delta = zb - za;
  const double ramp =
      (opt.profile == laminate_profile::smoothed) ? static_cast<double>(n) * q->lpNorm<Eigen::Infinity>() / N : 0.0;
  double theta[3] = {0, 0, 0};
  for (std::size_t i = 0; i < f.nodes(); ++i) {
    f.angles(i, theta);
    double phase = (opt.dims == 2) ? (*q)[0] * theta[0] + (*q)[2] * theta[1]
                                   : (*q)[0] * theta[0] + (*q)[1] * theta[1] + (*q)[2] * theta[2];
    double u = static_cast<double>(n) * phase / (2.0 * kPi);
    double chi = detail::indicator(u, lambda, ramp);
    f.set_value(i, za + chi * delta);
  }
  return f;
}

// Histogram of field values projected onto the segment [ref_a, ref_b]:
// least-squares segment parameter per node plus the off-segment distance.
struct EmpiricalYM {
  std::vector<double> param_mass;     // over [0,1], first/last bins hold the atoms
  std::vector<double> offset_mass;    // over [0, max_offset]
  double max_offset = 0.0;
  double mass_at_a = 0.0;             // parameter-0 bin
  double mass_at_b = 0.0;             // parameter-1 bin
};

inline EmpiricalYM empirical_ym(const TorusField& f, const Vec8& ref_a, const Vec8& ref_b,
                                int bins = 64) {
  const Vec8 d = ref_b - ref_a;
  const double dn2 = d.squaredNorm();
  if (dn2 == 0.0) throw std::domain_error("empirical_ym: reference states must differ");
  if (bins < 2) throw config_error("empirical_ym: need at least two bins");
  EmpiricalYM h;
  h.param_mass.assign(static_cast<std::size_t>(bins), 0.0);
  std::vector<double> offsets(f.nodes());
  for (std::size_t i = 0; i < f.nodes(); ++i) {
    Vec8 z = f.value(i);
    double s = (z - ref_a).dot(d) / dn2;
    offsets[i] = (z - ref_a - s * d).norm();
    h.max_offset = std::max(h.max_offset, offsets[i]);
    double clamped = std::clamp(s, 0.0, 1.0);
    int b = std::min(bins - 1, static_cast<int>(clamped * bins));
    h.param_mass[static_cast<std::size_t>(b)] += 1.0;
  }
  h.offset_mass.assign(static_cast<std::size_t>(bins), 0.0);
  const double scale = h.max_offset > 0.0 ? h.max_offset : 1.0;
  for (double off : offsets) {
    int b = std::min(bins - 1, static_cast<int>(off / scale * bins));
    h.offset_mass[static_cast<std::size_t>(b)] += 1.0;
  }
  const double inv = 1.0 / static_cast<double>(f.nodes());
  for (auto& m : h.param_mass) m *= inv;
  for (auto& m : h.offset_mass) m *= inv;
  h.mass_at_a = h.param_mass.front();
  h.mass_at_b = h.param_mass.back();
  return h;
}

enum class RigidityVerdict { OSCILLATION_OBSERVED, RIGIDITY_CONSISTENT, DEGENERATE };

struct RigidityRow {
  int n = 0;
  double afree = 0.0;      // spectral residual of the candidate field
  double distance = 0.0;   // normalized L1 distance to its free-field projection
  double mass_a = 0.0;
  double mass_b = 0.0;
};

struct RigidityReport {
  RigidityVerdict verdict = RigidityVerdict::DEGENERATE;
  bool pair_connected = false;
  bool difference_zero = false;
  std::vector<RigidityRow> rows;
  double delta_floor = 1e-3;
};

namespace detail {

inline double l1_distance_normalized(const TorusField& a, const TorusField& b) {
  Vec8 mean = a.mean();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.nodes(); ++i) {
    num += (a.value(i) - b.value(i)).norm();
    den += (a.value(i) - mean).norm();
  }
  if (den == 0.0) return 0.0;
  return num / den;
}

}  // namespace detail

struct RigidityConfig {
  std::vector<int> n_list{1, 2, 4, 8};
  int N = 256;
  int dims = 2;  // slice mode by default: constructed fields vary in x . xi only
  double lambda = 0.5;
  double delta_floor = 1e-3;
  Vec3 fallback_direction = Vec3(0.0, 0.0, 1.0);  // stripes for non-cone pairs
};

// Builds two-valued candidate fields between the lifts of the pair at each
// frequency. For a wave-cone-connected pair the fields are exactly free
// fields of the operator and the two-atom empirical measure persists; the
// experiment reports oscillation. For a non-connected pair the projected
// field is compared against the candidate; a distance floor that does not
// shrink with n is consistent with rigidity (a finite run cannot prove the
// asymptotic statement).
inline RigidityReport rigidity_experiment(const State& a, const State& b,
                                          const RigidityConfig& cfg = {}) {
  RigidityReport rep;
  rep.delta_floor = cfg.delta_floor;
  const Vec8 za = lift(a, 2.0).to_vec();
  const Vec8 zb = lift(b, 2.0).to_vec();
  const Vec8 d = zb - za;
  if (d.norm() <= 1e-12 * (1.0 + za.norm() + zb.norm())) {
    rep.difference_zero = true;
    rep.verdict = RigidityVerdict::DEGENERATE;
    for (int n : cfg.n_list) rep.rows.push_back({n, 0.0, 0.0, 1.0, 0.0});
    return rep;
  }
  rep.pair_connected = wave_cone_member(d);
  LaminateOptions opt;
  opt.dims = cfg.dims;
  opt.profile = laminate_profile::exact;
  if (!rep.pair_connected) opt.direction = cfg.fallback_direction;

  for (int n : cfg.n_list) {
    TorusField f = laminate(za, zb, cfg.lambda, n, cfg.N, opt);
    TorusField proj = afree_projection(f);
    RigidityRow row;
    row.n = n;
    row.afree = afree_residual(f);
    row.distance = detail::l1_distance_normalized(f, proj);
    EmpiricalYM ym = empirical_ym(f, za, zb);
    row.mass_a = ym.mass_at_a;
    row.mass_b = ym.mass_at_b;
    rep.rows.push_back(row);
  }

  if (rep.pair_connected) {
    bool ok = true;
    for (const auto& r : rep.rows) {
      ok = ok && r.afree <= 1e-10 && r.distance <= 1e-10;
      ok = ok && std::abs(r.mass_a - cfg.lambda) <= 2.0 / cfg.N &&
           std::abs(r.mass_b - (1.0 - cfg.lambda)) <= 2.0 / cfg.N;
    }
    rep.verdict = ok ? RigidityVerdict::OSCILLATION_OBSERVED : RigidityVerdict::DEGENERATE;
  } else {
    bool above = true, nondecreasing = true;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      above = above && rep.rows[i].distance > cfg.delta_floor;
      if (i > 0) nondecreasing = nondecreasing && rep.rows[i].distance >= rep.rows[i - 1].distance - 1e-9;
    }
    rep.verdict = (above && nondecreasing) ? RigidityVerdict::RIGIDITY_CONSISTENT
                                           : RigidityVerdict::DEGENERATE;
  }
  return rep;
}

}  // namespace eulerwave
