#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "eulerwave/young_measures.hpp"

using namespace eulerwave;

namespace {

TwoAtomYM witness_ym(double lambda = 0.5) {
  TwoAtomYM ym;
  ym.lambda = lambda;
  ym.atom_a = AtomField(baseline_family(6.0));
  ym.atom_b = AtomField(perturbed_family(-0.001, 5.8));
  ym.gamma = 2.0;
  return ym;
}

TwoAtomYM state_ym(double lambda, const State& a, const State& b, double gamma = 2.0) {
  TwoAtomYM ym;
  ym.lambda = lambda;
  ym.atom_a = AtomField(a);
  ym.atom_b = AtomField(b);
  ym.gamma = gamma;
  return ym;
}

}  // namespace

TEST_CASE("moments: rest-state mixture") {
  auto ym = state_ym(0.5, {1.0, Vec2(0, 0)}, {4.0, Vec2(0, 0)});
  MomentFields m = moments(ym, std::nullopt, 0.5, 0.0);
  CHECK_THAT(m.rho_bar, Catch::Matchers::WithinAbs(2.5, 1e-15));
  CHECK(m.rho_u_bar.norm() == 0.0);
  CHECK(m.rho_uu_bar.norm() == 0.0);
  CHECK_THAT(m.p_rho_bar, Catch::Matchers::WithinAbs(8.5, 1e-15));
  CHECK(m.rho_usq_bar == 0.0);
}

TEST_CASE("moments: opposed unit velocities") {
  auto ym = state_ym(0.5, {1.0, Vec2(1, 0)}, {1.0, Vec2(-1, 0)});
  MomentFields m = moments(ym, std::nullopt, 0.5, 0.0);
  CHECK_THAT(m.rho_bar, Catch::Matchers::WithinAbs(1.0, 1e-15));
  CHECK(m.rho_u_bar.norm() <= 1e-15);
  CHECK_THAT(m.rho_uu_bar(0, 0), Catch::Matchers::WithinAbs(1.0, 1e-14));
  CHECK(std::abs(m.rho_uu_bar(0, 1)) <= 1e-15);
  CHECK(std::abs(m.rho_uu_bar(1, 1)) <= 1e-14);
  CHECK_THAT(m.p_rho_bar, Catch::Matchers::WithinAbs(1.0, 1e-15));
}

TEST_CASE("moments: degenerate mixture reduces to a single atom") {
  State a{2.0, Vec2(0.5, -1.0)}, b{1.0, Vec2(3.0, 2.0)};
  MomentFields m1 = moments(state_ym(1.0, a, b), std::nullopt, 0.1, 0.1);
  MomentFields ma = moments(state_ym(1.0, a, a), std::nullopt, 0.1, 0.1);
  CHECK_THAT(m1.rho_bar, Catch::Matchers::WithinAbs(ma.rho_bar, 1e-14));
  CHECK((m1.rho_u_bar - ma.rho_u_bar).norm() <= 1e-14);
  CHECK((m1.rho_uu_bar - ma.rho_uu_bar).norm() <= 1e-14);
}

TEST_CASE("moments: affine in lambda, trace consistency, PSD") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> rho(0.1, 3.0), vel(-2.0, 2.0), lam(0.0, 1.0),
      gam(1.2, 3.0);
  for (int i = 0; i < 1000; ++i) {
    State a{rho(rng), Vec2(vel(rng), vel(rng))}, b{rho(rng), Vec2(vel(rng), vel(rng))};
    double g = gam(rng), l = lam(rng);
    MomentFields m0 = moments(state_ym(0.0, a, b, g), std::nullopt, 0, 0);
    MomentFields m1 = moments(state_ym(1.0, a, b, g), std::nullopt, 0, 0);
    MomentFields ml = moments(state_ym(l, a, b, g), std::nullopt, 0, 0);
    REQUIRE(std::abs(ml.rho_bar - (l * m1.rho_bar + (1 - l) * m0.rho_bar)) <= 1e-12);
    REQUIRE((ml.rho_u_bar - (l * m1.rho_u_bar + (1 - l) * m0.rho_u_bar)).norm() <= 1e-12);
    REQUIRE((ml.rho_uu_bar - (l * m1.rho_uu_bar + (1 - l) * m0.rho_uu_bar)).norm() <= 1e-12);
    REQUIRE(std::abs(ml.p_rho_bar - (l * m1.p_rho_bar + (1 - l) * m0.p_rho_bar)) <= 1e-12);
    // trace of the tensor moment equals the kinetic moment without concentration
    REQUIRE(std::abs(ml.rho_uu_bar.trace() - ml.rho_usq_bar) <= 1e-12 * (1.0 + ml.rho_usq_bar));
    REQUIRE(ml.rho_bar >= 0.0);
    Eigen::SelfAdjointEigenSolver<Mat2> es(ml.rho_uu_bar);
    REQUIRE(es.eigenvalues().minCoeff() >= -1e-12);
  }
}

TEST_CASE("moments: zero concentration weight is a no-op") {
  auto ym = state_ym(0.4, {1.0, Vec2(1, 2)}, {2.0, Vec2(-1, 0)});
  ConcentrationPart conc;
  conc.weight = {0.0};
  conc.atoms = {{1.0, Vec2(0, 0), 1.0}};
  MomentFields with = moments(ym, conc, 0.5, 0.0);
  MomentFields without = moments(ym, std::nullopt, 0.5, 0.0);
  CHECK(with.rho_uu_bar == without.rho_uu_bar);
  CHECK(with.p_rho_bar == without.p_rho_bar);
}

TEST_CASE("moments: concentration atoms add tensor, pressure, kinetic mass") {
  auto ym = state_ym(0.5, {1.0, Vec2(0, 0)}, {1.0, Vec2(0, 0)});
  ConcentrationPart conc;
  conc.t0 = 0;
  conc.t1 = 1;
  conc.x0 = -1;
  conc.x1 = 1;
  conc.weight = {2.0};
  // beta1 = 0 atom on the sphere: |beta'|^4 = 1
  SphereAtom atom{0.0, Vec2(1.0, 0.0), 1.0};
  conc.atoms = {atom};
  validate_concentration(conc, 2.0);
  MomentFields m = moments(ym, conc, 0.5, 0.0);
  CHECK_THAT(m.rho_uu_bar(0, 0), Catch::Matchers::WithinAbs(2.0, 1e-14));
  CHECK_THAT(m.rho_usq_bar, Catch::Matchers::WithinAbs(2.0, 1e-14));
  CHECK_THAT(m.p_rho_bar, Catch::Matchers::WithinAbs(1.0, 1e-14));  // beta1 = 0 adds nothing
  // trace consistency persists with concentration present
  CHECK(std::abs(m.rho_uu_bar.trace() - m.rho_usq_bar) <= 1e-13);
}

TEST_CASE("sphere atoms are validated") {
  CHECK_THROWS_AS(validate_sphere_atom({0.5, Vec2(1.0, 0.0), 1.0}, 2.0), std::domain_error);
  CHECK_NOTHROW(validate_sphere_atom({0.0, Vec2(0.0, 1.0), 1.0}, 2.0));
  CHECK_NOTHROW(validate_sphere_atom({1.0, Vec2(0.0, 0.0), 1.0}, 2.0));
  ConcentrationPart conc;
  conc.weight = {1.0};
  conc.atoms = {{1.0, Vec2(0, 0), 0.4}};  // weights must sum to 1
  CHECK_THROWS_AS(validate_concentration(conc, 2.0), std::domain_error);
}

TEST_CASE("mvs residual: the witness measure solves the averaged equations") {
  TwoAtomYM ym = witness_ym();
  TestFunctionSet tests = random_test_set(8, 1234, 4.0, 192, true);
  CHECK(mvs_residual(ym, std::nullopt, tests) <= 1e-6);
}

TEST_CASE("mvs residual: single-atom measure reduces to the fan weak form") {
  FanSubsolution f = baseline_family(6.0);
  TwoAtomYM ym;
  ym.lambda = 0.3;
  ym.atom_a = AtomField(f);
  ym.atom_b = AtomField(f);
  TestFunctionSet tests = random_test_set(4, 555, 4.0, 96, true);
  double a = mvs_residual(ym, std::nullopt, tests);
  double b = weak_form_residual(subsolution_fan(f), tests);
  CHECK(std::abs(a - b) <= 1e-12);
}

TEST_CASE("mvs residual: corrupted atom is detected") {
  TwoAtomYM ym = witness_ym();
  FanSubsolution bad = perturbed_params(-0.001, 5.8);
  bad.nu_minus = -2.3;  // wrong interface speed
  ym.atom_b = AtomField(bad);
  TestFunctionSet tests;
  TestBump b;
  b.ct = 0.5;
  b.rt = 0.2;
  b.cx = -2.3 * 0.5;
  b.rx = 0.4;
  tests.bumps = {b};
  tests.resolution = 128;
  CHECK(mvs_residual(ym, std::nullopt, tests) > 1e-3);
}

TEST_CASE("admissibility residual: witness measure is admissible") {
  TwoAtomYM ym = witness_ym();
  TestFunctionSet tests = random_test_set(8, 77, 4.0, 192);
  CHECK(admissibility_residual(ym, std::nullopt, tests) <= 1e-6);
}

TEST_CASE("admissibility residual: constant single atom sits at zero") {
  State s{1.7, Vec2(0.1, -0.2)};
  TwoAtomYM ym = state_ym(0.5, s, s);
  TestFunctionSet tests = random_test_set(4, 42, 2.0, 96);
  CHECK(std::abs(admissibility_residual(ym, std::nullopt, tests)) <= 1e-12);
}

TEST_CASE("admissibility residual: infeasible kinetic level shows a positive residual") {
  FanSubsolution bad = baseline_params(6.9);
  TwoAtomYM ym;
  ym.lambda = 0.5;
  ym.atom_a = AtomField(bad);
  ym.atom_b = AtomField(bad);
  TestFunctionSet tests;
  TestBump b;
  b.ct = 0.5;
  b.rt = 0.2;
  b.cx = bad.nu_minus * 0.5;
  b.rx = 0.4;
  tests.bumps = {b};
  tests.resolution = 128;
  CHECK(admissibility_residual(ym, std::nullopt, tests) > 1e-3);
}

TEST_CASE("admissibility residual rejects sign-changing tests") {
  TwoAtomYM ym = witness_ym();
  TestFunctionSet tests = random_test_set(2, 7, 4.0, 64, true);
  CHECK_THROWS_AS(admissibility_residual(ym, std::nullopt, tests), std::invalid_argument);
}

TEST_CASE("selection verdict: witness measure cannot be generated") {
  TwoAtomYM ym = witness_ym();
  SelectionGrid grid = natural_selection_grid(ym);
  REQUIRE(grid.wedge_adapted);
  SelectionReport rep = selection_verdict(ym, grid);
  CHECK(rep.verdict == SelectionVerdict::NOT_GENERABLE);
  CHECK(rep.disconnected_fraction > 0.99);

  // enlarging the sampled region keeps the verdict
  SelectionGrid wide;
  wide.wedge_adapted = false;
  wide.t0 = 1e-3;
  wide.t1 = 1.0;
  wide.x0 = -6.0;
  wide.x1 = 6.0;
  wide.nt = 96;
  wide.nx = 96;
  SelectionReport rep2 = selection_verdict(ym, wide);
  CHECK(rep2.verdict == SelectionVerdict::NOT_GENERABLE);
}

TEST_CASE("selection verdict: equal-density atoms are inconclusive") {
  TwoAtomYM ym = state_ym(0.5, {2.0, Vec2(1, 1)}, {2.0, Vec2(0, 3)});
  SelectionReport rep = selection_verdict(ym, natural_selection_grid(ym));
  CHECK(rep.verdict == SelectionVerdict::INCONCLUSIVE);
  CHECK(rep.disconnected_fraction == 0.0);
}

TEST_CASE("selection verdict: identical atoms are inconclusive") {
  FanSubsolution f = baseline_family(6.0);
  TwoAtomYM ym;
  ym.lambda = 0.5;
  ym.atom_a = AtomField(f);
  ym.atom_b = AtomField(f);
  SelectionReport rep = selection_verdict(ym, natural_selection_grid(ym));
  CHECK(rep.verdict == SelectionVerdict::INCONCLUSIVE);
}

TEST_CASE("selection verdict: strict mixture required") {
  TwoAtomYM ym = witness_ym();
  ym.lambda = 0.0;
  CHECK_THROWS_AS(selection_verdict(ym, natural_selection_grid(ym)), std::domain_error);
  ym.lambda = 1.0;
  CHECK_THROWS_AS(selection_verdict(ym, natural_selection_grid(ym)), std::domain_error);
}
