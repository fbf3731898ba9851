#pragma once

// Compactly supported smooth test bumps on the (t, x2) slab and a quadrature
// engine for integrals of bump gradients against fields that are constant on
// the regions cut out by interface lines x2 = nu * t. Cells of a tensor grid
// are clipped against the lines, so the piecewise structure is resolved
// exactly and the only error is the smooth-quadrature error (a degree-5
// triangle rule per clipped piece).

#include <random>
#include <vector>

#include "eulerwave/common.hpp"

namespace eulerwave {

// One factor of a product bump: s -> P(s) * exp(-1/(1-s^2)) on |s| < 1.
struct BumpProfile {
  std::vector<double> poly{1.0};  // P coefficients, constant term first

  double poly_at(double s) const {
    double v = 0.0;
    for (std::size_t i = poly.size(); i-- > 0;) v = v * s + poly[i];
    return v;
  }
  double dpoly_at(double s) const {
    double v = 0.0;
    for (std::size_t i = poly.size(); i-- > 1;) v = v * s + poly[i] * static_cast<double>(i);
    return v;
  }
  double value(double s) const {
    if (std::abs(s) >= 1.0) return 0.0;
    return poly_at(s) * std::exp(-1.0 / (1.0 - s * s));
  }
  double deriv(double s) const {
    if (std::abs(s) >= 1.0) return 0.0;
    const double g = 1.0 - s * s;
    const double mexp = std::exp(-1.0 / g);
    return (dpoly_at(s) - poly_at(s) * 2.0 * s / (g * g)) * mexp;
  }
};

// b(t, x2) = Bt((t-ct)/rt) * Bx((x2-cx)/rx), supported on a box inside {t>0}.
struct TestBump {
  double ct = 0.5, cx = 0.0;
  double rt = 0.25, rx = 0.25;
  BumpProfile profile_t, profile_x;

  double value(double t, double x) const {
    return profile_t.value((t - ct) / rt) * profile_x.value((x - cx) / rx);
  }
  Vec2 gradient(double t, double x) const {
    const double st = (t - ct) / rt, sx = (x - cx) / rx;
    return Vec2(profile_t.deriv(st) / rt * profile_x.value(sx),
                profile_t.value(st) * profile_x.deriv(sx) / rx);
  }
  bool nonnegative() const {
    return profile_t.poly.size() == 1 && profile_t.poly[0] > 0.0 &&
           profile_x.poly.size() == 1 && profile_x.poly[0] > 0.0;
  }
};

struct TestFunctionSet {
  std::vector<TestBump> bumps;
  int resolution = 256;  // cells per axis over each bump's bounding box
};

// Random bumps on the slab t in (0, 1], x2 in [-span, span]. Plain mollifier
// profiles unless modulate is set (then a mild random linear factor is mixed
// in; such bumps change sign and are not used for admissibility forms).
inline TestFunctionSet random_test_set(int count, std::uint64_t seed, double span = 4.0,
                                       int resolution = 256, bool modulate = false) {
  TestFunctionSet set;
  set.resolution = resolution;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < count; ++i) {
    TestBump b;
    b.rt = 0.05 + 0.15 * unif(rng);
    b.ct = b.rt + (1.0 - 2.0 * b.rt) * unif(rng) + 1e-3;
    b.rx = (0.05 + 0.15 * unif(rng)) * span;
    b.cx = span * (2.0 * unif(rng) - 1.0);
    if (modulate) {
      b.profile_t.poly = {1.0, 0.5 * (2.0 * unif(rng) - 1.0)};
      b.profile_x.poly = {1.0, 0.5 * (2.0 * unif(rng) - 1.0)};
    }
    set.bumps.push_back(b);
  }
  return set;
}

namespace detail {

struct Polygon {
  // small fixed-capacity polygon in (t, x2)
  std::array<Vec2, 8> v{};
  int n = 0;
  void push(const Vec2& p) { v[static_cast<std::size_t>(n++)] = p; }
};

// Clip polygon against half-plane sign*(x2 - nu*t) >= 0.
inline Polygon clip_halfplane(const Polygon& poly, double nu, double sign) {
  Polygon out;
  auto side = [&](const Vec2& p) { return sign * (p.y() - nu * p.x()); };
  for (int i = 0; i < poly.n; ++i) {
    const Vec2& a = poly.v[static_cast<std::size_t>(i)];
    const Vec2& b = poly.v[static_cast<std::size_t>((i + 1) % poly.n)];
    const double sa = side(a), sb = side(b);
    if (sa >= 0.0) out.push(a);
    if ((sa > 0.0 && sb < 0.0) || (sa < 0.0 && sb > 0.0)) {
      const double w = sa / (sa - sb);
      out.push(a + w * (b - a));
    }
  }
  return out;
}

// Degree-5 rule on a triangle (7 points).
inline void triangle_rule(const Vec2& a, const Vec2& b, const Vec2& c,
                          const std::function<void(const Vec2&, double)>& accum) {
  static const double w0 = 9.0 / 40.0;
  static const double wa = (155.0 - std::sqrt(15.0)) / 1200.0;
  static const double wb = (155.0 + std::sqrt(15.0)) / 1200.0;
  static const double pa = (6.0 - std::sqrt(15.0)) / 21.0;
  static const double pb = (6.0 + std::sqrt(15.0)) / 21.0;
  const double area = 0.5 * std::abs((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
  if (area == 0.0) return;
  auto bary = [&](double l1, double l2, double l3) { return l1 * a + l2 * b + l3 * c; };
  accum(bary(1.0 / 3, 1.0 / 3, 1.0 / 3), w0 * area);
  accum(bary(pa, pa, 1 - 2 * pa), wa * area);
  accum(bary(pa, 1 - 2 * pa, pa), wa * area);
  accum(bary(1 - 2 * pa, pa, pa), wa * area);
  accum(bary(pb, pb, 1 - 2 * pb), wb * area);
  accum(bary(pb, 1 - 2 * pb, pb), wb * area);
  accum(bary(1 - 2 * pb, pb, pb), wb * area);
}

inline void polygon_rule(const Polygon& poly,
                         const std::function<void(const Vec2&, double)>& accum) {
  for (int i = 1; i + 1 < poly.n; ++i)
    triangle_rule(poly.v[0], poly.v[static_cast<std::size_t>(i)],
                  poly.v[static_cast<std::size_t>(i + 1)], accum);
}

}  // namespace detail

// Per-region integrals of the bump gradient: result[r] = integral over
// region r of (d_t b, d_x2 b). Region r is { speeds[r-1]*t < x2 < speeds[r]*t }
// with sentinels at +-infinity; speeds must be strictly increasing.
inline std::vector<Vec2> bump_gradient_by_region(const TestBump& bump,
                                                 const std::vector<double>& speeds,
                                                 int resolution) {
  if (resolution < 8)
    throw config_error("quadrature resolution too low for the declared support");
  if (!(bump.ct - bump.rt >= 0.0))
    throw config_error("test bump support must lie inside {t > 0}");
  for (std::size_t i = 1; i < speeds.size(); ++i)
    if (!(speeds[i - 1] < speeds[i]))
      throw std::invalid_argument("interface speeds must be strictly increasing");

  const int R = static_cast<int>(speeds.size()) + 1;
  const double t0 = bump.ct - bump.rt, t1 = bump.ct + bump.rt;
  const double x0 = bump.cx - bump.rx, x1 = bump.cx + bump.rx;
  const double dt = (t1 - t0) / resolution, dx = (x1 - x0) / resolution;

  std::vector<std::vector<Vec2>> partial(static_cast<std::size_t>(resolution),
                                         std::vector<Vec2>(static_cast<std::size_t>(R), Vec2::Zero()));
  parallel_for(static_cast<std::size_t>(resolution), [&](std::size_t row) {
    auto& acc = partial[row];
    const double ca = t0 + static_cast<double>(row) * dt;
    const double cb = ca + dt;
    for (int j = 0; j < resolution; ++j) {
      const double xa = x0 + j * dx, xb = xa + dx;
      detail::Polygon cell;
      cell.push(Vec2(ca, xa));
      cell.push(Vec2(cb, xa));
      cell.push(Vec2(cb, xb));
      cell.push(Vec2(ca, xb));
      for (int r = 0; r < R; ++r) {
        detail::Polygon piece = cell;
        if (r > 0) piece = detail::clip_halfplane(piece, speeds[static_cast<std::size_t>(r - 1)], +1.0);
        if (piece.n >= 3 && r < R - 1)
          piece = detail::clip_halfplane(piece, speeds[static_cast<std::size_t>(r)], -1.0);
        if (piece.n < 3) continue;
        detail::polygon_rule(piece, [&](const Vec2& p, double w) {
          acc[static_cast<std::size_t>(r)] += w * bump.gradient(p.x(), p.y());
        });
      }
    }
  });
  std::vector<Vec2> total(static_cast<std::size_t>(R), Vec2::Zero());
  for (const auto& rowacc : partial)
    for (int r = 0; r < R; ++r) total[static_cast<std::size_t>(r)] += rowacc[static_cast<std::size_t>(r)];
  return total;
}

}  // namespace eulerwave
