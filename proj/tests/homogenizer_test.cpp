#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "homog/energy_models.hpp"
#include "homog/homogenizer.hpp"

using namespace homog;

namespace {

HomSchedule quick_schedule(std::vector<double> ts, int nodes_per_unit) {
  HomSchedule s;
  s.t_values = std::move(ts);
  s.nodes_per_unit = nodes_per_unit;
  s.solve.gradient_tolerance = 1e-9;
  s.solve.max_iterations = 20000;
  return s;
}

} // namespace

TEST_CASE("convex density: effective value equals the pointwise value") {
  const Lagrangian L = make_model("quadratic-iso");
  const Matrix Y = parse_matrix("1,2;3,4");
  const HomResult r = estimate_f_hom(L, Y, quick_schedule({1.0, 2.0}, 8));
  CHECK(r.all_converged);
  CHECK(r.growth_ok);
  CHECK(r.f_hom == doctest::Approx(30.0).epsilon(1e-10));
  CHECK(std::fabs(r.slope) < 1e-8);
  CHECK(r.fit_residual < 1e-10);
  REQUIRE(r.estimates.size() == 2);
  for (const CellEstimate& e : r.estimates)
    CHECK(e.energy == doctest::Approx(30.0).epsilon(1e-11));
}

TEST_CASE("layered composite reaches the harmonic mean") {
  const Lagrangian L = make_model("layered-1d");
  Matrix Y(1, 1);
  Y(0, 0) = 1.0;
  // Plain descent needs tens of thousands of iterations to push the
  // gradient to 1e-5 on the finest of these grids, and the
  // energy-difference line search cannot reach floors near roundoff at
  // all, so the convergence flag gets a loose tolerance and a wide budget.
  HomSchedule sched = quick_schedule({1.0, 2.0, 4.0}, 32);
  sched.solve.gradient_tolerance = 1e-5;
  sched.solve.max_iterations = 60000;
  const HomResult r = estimate_f_hom(L, Y, sched);
  CHECK(r.all_converged);
  CHECK(r.growth_ok);
  CHECK(r.f_hom == doctest::Approx(4.0 / 3.0).epsilon(2e-3));
}

TEST_CASE("schedule validation") {
  const Lagrangian L = make_model("quadratic-iso");
  const Matrix Y = Matrix::identity(2);
  CHECK_THROWS_AS(estimate_f_hom(L, Y, quick_schedule({}, 8)), std::invalid_argument);
  CHECK_THROWS_AS(estimate_f_hom(L, Y, quick_schedule({2.0, 1.0}, 8)), std::invalid_argument);
  CHECK_THROWS_AS(estimate_f_hom(L, Y, quick_schedule({1.0, 1.0}, 8)), std::invalid_argument);
}

TEST_CASE("quasiconvexity probe signs") {
  const Matrix Y = Matrix::identity(2);
  const auto convex = [](const Matrix& A) { return A.frobenius_sq(); };
  CHECK(quasiconvexity_probe(convex, Y, 40, 5) >= -1e-9);

  const auto concave = [](const Matrix& A) { return -A.frobenius_sq(); };
  CHECK(quasiconvexity_probe(concave, Y, 40, 5) < -1e-6);
}

TEST_CASE("rank-one probe signs") {
  const Matrix Y = Matrix::identity(2);
  // For |.|^2 the centered second difference along tau -> Y + tau a x b is
  // the constant 2 |a x b|^2 >= 0, so no negative curvature is found and
  // the probe reports exactly zero.
  const auto convex = [](const Matrix& A) { return A.frobenius_sq(); };
  CHECK(rank_one_probe(convex, Y, 32, 17) == 0.0);

  // Negating the density negates every second difference, so the probe
  // must find strongly negative curvature, and deterministically so.
  const auto concave = [](const Matrix& A) { return -A.frobenius_sq(); };
  const double worst = rank_one_probe(concave, Y, 32, 17);
  CHECK(worst < -1.0);
  CHECK(rank_one_probe(concave, Y, 32, 17) == worst);
}

TEST_CASE("column permutation symmetry for an isotropic density") {
  const Lagrangian L = make_model("quadratic-iso");
  const Matrix Y = parse_matrix("1,0.5;0.25,1");
  const SymmetryReport rep = permutation_symmetry_check(L, Y, 0, 1, quick_schedule({1.0, 2.0}, 8));
  CHECK(rep.pass);
  CHECK(rep.difference <= rep.tolerance);
  CHECK(rep.base.all_converged);
  CHECK(rep.permuted.all_converged);
}

TEST_CASE("shrinking-oscillation sweep approaches the effective value") {
  const Lagrangian L = make_model("layered-1d");
  Matrix Y(1, 1);
  Y(0, 0) = 1.0;
  HomSchedule sched = quick_schedule({1.0, 2.0, 4.0}, 32);
  sched.solve.gradient_tolerance = 1e-5;
  sched.solve.max_iterations = 60000;
  const SweepReport rep = epsilon_sweep_compare(L, Y, {1.0, 0.5, 0.25}, sched);
  CHECK(rep.all_converged);
  CHECK(rep.pass);
  CHECK(rep.final_rel_gap < 0.03);
  REQUIRE(rep.points.size() == 3);
  CHECK(rep.points[0].epsilon == 1.0);
  for (const SweepPoint& p : rep.points)
    CHECK(p.energy == doctest::Approx(4.0 / 3.0).epsilon(0.02));
}
