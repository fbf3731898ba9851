#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "eulerwave/rigidity_lab.hpp"

using namespace eulerwave;

namespace {

Vec8 lift_vec(double rho, double ux, double uy) {
  return lift({rho, Vec2(ux, uy)}, 2.0).to_vec();
}

TorusField random_field(int dims, int N, std::uint64_t seed) {
  TorusField f(dims, N);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (std::size_t i = 0; i < f.nodes(); ++i)
    for (int c = 0; c < 8; ++c) f.node(i)[c] = unif(rng);
  return f;
}

}  // namespace

TEST_CASE("fft: matches a naive DFT and inverts") {
  const std::size_t n = 16;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<cplx> a(n), keep;
  for (auto& v : a) v = cplx(unif(rng), unif(rng));
  keep = a;
  fft_strided(a, 0, 1, n, -1);
  for (std::size_t k = 0; k < n; ++k) {
    cplx ref(0, 0);
    for (std::size_t j = 0; j < n; ++j)
      ref += keep[j] * std::polar(1.0, -2.0 * kPi * static_cast<double>(j * k % n) / n);
    REQUIRE(std::abs(a[k] - ref) <= 1e-12 * (1.0 + std::abs(ref)));
  }
  fft_strided(a, 0, 1, n, +1);
  for (std::size_t j = 0; j < n; ++j) REQUIRE(std::abs(a[j] - keep[j]) <= 1e-13);
}

TEST_CASE("torus field: grid constraints") {
  CHECK_THROWS_AS(TorusField(2, 100), config_error);  // not a power of two
  CHECK_THROWS_AS(TorusField(4, 64), config_error);
  CHECK_NOTHROW(TorusField(3, 16));
}

TEST_CASE("rank scan: constant rank 3 for the relaxed operator") {
  RankScanResult r = rank_scan(10000);
  CHECK(r.min_rank == 3);
  CHECK(r.max_rank == 3);
}

TEST_CASE("rank scan: toy operators") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 8);
  m(0, 0) = 1.0;  // rank one
  RankScanResult same = rank_scan({m, m, m}, 500);
  CHECK(same.min_rank == 1);
  CHECK(same.max_rank == 1);

  // diag(xi1, xi2) drops rank on the axes
  Eigen::MatrixXd a1 = Eigen::MatrixXd::Zero(2, 2), a2 = Eigen::MatrixXd::Zero(2, 2);
  a1(0, 0) = 1.0;
  a2(1, 1) = 1.0;
  RankScanResult toy = rank_scan({a1, a2}, 500);
  CHECK(toy.min_rank == 1);
  CHECK(toy.max_rank == 2);
}

TEST_CASE("laminate: two values, mean, stripes along the wave direction") {
  const Vec8 za = lift_vec(1, 0, 0), zb = lift_vec(1, 1, 0);
  LaminateOptions opt;
  opt.dims = 2;
  const int N = 64;
  TorusField f = laminate(za, zb, 0.5, 4, N, opt);
  for (std::size_t i = 0; i < f.nodes(); ++i) {
    Vec8 z = f.value(i);
    REQUIRE(std::min((z - za).norm(), (z - zb).norm()) <= 1e-14);
  }
  Vec8 mean = f.mean();
  CHECK((mean - (0.5 * za + 0.5 * zb)).norm() <= 2.0 * (zb - za).norm() / N);
  // varies only along the x2 axis of the slice
  for (int i = 0; i < N; ++i) {
    Vec8 first = f.value(static_cast<std::size_t>(i) * N);
    for (int j = 1; j < N; ++j)
      REQUIRE((f.value(static_cast<std::size_t>(i) * N) - first).norm() == 0.0);
  }
  CHECK(afree_residual(f) <= 1e-10);
}

TEST_CASE("laminate: lambda mass convention and degenerate ends") {
  const Vec8 za = lift_vec(1, 0, 0), zb = lift_vec(1, 1, 0);
  LaminateOptions opt;
  opt.dims = 2;
  TorusField f = laminate(za, zb, 1.0, 2, 32, opt);
  for (std::size_t i = 0; i < f.nodes(); ++i) REQUIRE((f.value(i) - za).norm() == 0.0);
  TorusField g = laminate(za, zb, 1.0 / 3.0, 1, 96, opt);
  EmpiricalYM h = empirical_ym(g, za, zb);
  CHECK_THAT(h.mass_at_a, Catch::Matchers::WithinAbs(1.0 / 3.0, 2.0 / 96.0));
  CHECK_THAT(h.mass_at_b, Catch::Matchers::WithinAbs(2.0 / 3.0, 2.0 / 96.0));
}

TEST_CASE("laminate: non-members are rejected") {
  CHECK_THROWS_AS(laminate(lift_vec(1, 0, 0), lift_vec(4, 0, 0), 0.5, 1, 32), std::domain_error);
}

TEST_CASE("laminate: smoothed profile keeps the oscillation free") {
  const Vec8 za = lift_vec(1, 0, 0), zb = lift_vec(1, 1, 0);
  LaminateOptions opt;
  opt.dims = 2;
  opt.profile = laminate_profile::smoothed;
  TorusField f = laminate(za, zb, 0.5, 2, 128, opt);
  CHECK(afree_residual(f) <= 1e-10);
  Vec8 mean = f.mean();
  CHECK((mean - (0.5 * za + 0.5 * zb)).norm() <= 4.0 * (zb - za).norm() / 128.0);
}

TEST_CASE("afree residual: constant field and non-kernel stripes") {
  TorusField f(2, 32);
  Vec8 z = lift_vec(2, 1, 1);
  for (std::size_t i = 0; i < f.nodes(); ++i) f.set_value(i, z);
  CHECK(afree_residual(f) == 0.0);

  // stripes of a cone vector along the time axis are not annihilated
  const Vec8 za = lift_vec(1, 0, 0), zb = lift_vec(1, 1, 0);
  LaminateOptions opt;
  opt.dims = 2;
  opt.direction = Vec3(1.0, 0.0, 0.0);
  TorusField g = laminate(za, zb, 0.5, 2, 64, opt);
  CHECK(afree_residual(g) > 1e-2);
}

TEST_CASE("afree projection: annihilates, idempotent, fixes free fields") {
  TorusField f = random_field(2, 32, 99);
  TorusField p = afree_projection(f);
  CHECK(afree_residual(p) <= 1e-10);
  TorusField pp = afree_projection(p);
  double diff = 0.0;
  for (std::size_t i = 0; i < p.nodes(); ++i) diff = std::max(diff, (pp.value(i) - p.value(i)).norm());
  CHECK(diff <= 1e-12);
  CHECK((p.mean() - f.mean()).norm() <= 1e-12);

  const Vec8 za = lift_vec(1, 0, 0), zb = lift_vec(1, 1, 0);
  LaminateOptions opt;
  opt.dims = 2;
  TorusField lam = laminate(za, zb, 0.5, 4, 64, opt);
  TorusField plam = afree_projection(lam);
  double d = 0.0;
  for (std::size_t i = 0; i < lam.nodes(); ++i) d = std::max(d, (plam.value(i) - lam.value(i)).norm());
  CHECK(d <= 1e-10);
}

TEST_CASE("afree projection works on the full 3-d torus") {
  TorusField f = random_field(3, 8, 7);
  TorusField p = afree_projection(f);
  CHECK(afree_residual(p) <= 1e-10);
}

TEST_CASE("projector algebra per frequency") {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    Vec3 k(unif(rng), unif(rng), unif(rng));
    if (k.norm() < 1e-3) continue;
    Mat38 A = symbol(k.normalized());
    Eigen::Matrix<double, 8, 8> P =
        Eigen::Matrix<double, 8, 8>::Identity() - A.transpose() * (A * A.transpose()).inverse() * A;
    REQUIRE((P * P - P).norm() <= 1e-12);
    REQUIRE((A * P).norm() <= 1e-12);
    REQUIRE((P - P.transpose()).norm() <= 1e-12);
  }
}

TEST_CASE("afree residual: invariant under cyclic translation") {
  TorusField f = random_field(2, 32, 5);
  const int N = f.N();
  TorusField g(2, N);
  const int st = 7, sx = 13;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      std::size_t src = static_cast<std::size_t>(i) * N + static_cast<std::size_t>(j);
      std::size_t dst = static_cast<std::size_t>((i + st) % N) * N +
                        static_cast<std::size_t>((j + sx) % N);
      g.set_value(dst, f.value(src));
    }
  CHECK(std::abs(afree_residual(f) - afree_residual(g)) <= 1e-12);
}

TEST_CASE("empirical ym: constant field and bad references") {
  const Vec8 za = lift_vec(1, 0, 0), zb = lift_vec(1, 1, 0);
  TorusField f(2, 16);
  for (std::size_t i = 0; i < f.nodes(); ++i) f.set_value(i, za);
  EmpiricalYM h = empirical_ym(f, za, zb);
  CHECK(h.mass_at_a == 1.0);
  CHECK(h.mass_at_b == 0.0);
  double total = 0.0;
  for (double m : h.param_mass) total += m;
  CHECK_THAT(total, Catch::Matchers::WithinAbs(1.0, 1e-12));
  CHECK_THROWS_AS(empirical_ym(f, za, za), std::domain_error);
}

TEST_CASE("rigidity experiment: connected pair oscillates") {
  RigidityConfig cfg;
  cfg.N = 128;
  RigidityReport rep = rigidity_experiment({1.0, Vec2(1, 0)}, {1.0, Vec2(0, 0)}, cfg);
  CHECK(rep.verdict == RigidityVerdict::OSCILLATION_OBSERVED);
  CHECK(rep.pair_connected);
  for (const auto& r : rep.rows) {
    CHECK(r.afree <= 1e-10);
    CHECK(r.distance <= 1e-10);
    CHECK_THAT(r.mass_a, Catch::Matchers::WithinAbs(0.5, 2.0 / cfg.N));
  }
}

TEST_CASE("rigidity experiment: non-connected pair is rigidity consistent") {
  RigidityConfig cfg;
  cfg.N = 128;
  cfg.n_list = {1, 2, 4, 8, 16};
  RigidityReport rep = rigidity_experiment({1.0, Vec2(0, 0)}, {4.0, Vec2(0, 0)}, cfg);
  CHECK(rep.verdict == RigidityVerdict::RIGIDITY_CONSISTENT);
  CHECK_FALSE(rep.pair_connected);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    CHECK(rep.rows[i].distance > 1e-3);
    if (i > 0) CHECK(rep.rows[i].distance >= rep.rows[i - 1].distance - 1e-9);
  }
}

TEST_CASE("rigidity experiment: identical states degenerate") {
  RigidityReport rep = rigidity_experiment({2.0, Vec2(1, 1)}, {2.0, Vec2(1, 1)});
  CHECK(rep.verdict == RigidityVerdict::DEGENERATE);
  CHECK(rep.difference_zero);
  for (const auto& r : rep.rows) CHECK(r.distance == 0.0);
}
