#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "homog/cell_solver.hpp"
#include "homog/energy_models.hpp"
#include "homog/rng.hpp"

using namespace homog;

namespace {

Matrix columns3(const double c0[3], const double c1[3]) {
  Matrix A(3, 2);
  for (int i = 0; i < 3; ++i) {
    A(i, 0) = c0[i];
    A(i, 1) = c1[i];
  }
  return A;
}

const double kE1[3] = {1, 0, 0};
const double kE2[3] = {0, 1, 0};

Matrix random_matrix(int rows, int cols, Rng& rng, double lo = -2.0, double hi = 2.0) {
  Matrix A(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) A(i, j) = rng.uniform(lo, hi);
  return A;
}

} // namespace

TEST_CASE("model registry") {
  const std::vector<std::string> ids = model_ids();
  CHECK(ids.size() >= 8);
  for (const std::string& id : ids) {
    const Lagrangian L = make_model(id);
    CHECK(L.name == id);
    CHECK(L.m >= 1);
    CHECK(L.N >= 1);
    CHECK(bool(L.eval));
  }
  CHECK_THROWS_AS(make_model("no-such-model"), std::invalid_argument);
}

TEST_CASE("growth sandwich holds at random arguments") {
  Rng rng(11);
  for (const std::string& id : model_ids()) {
    const Lagrangian L = make_model(id);
    const std::vector<double> x(static_cast<std::size_t>(L.m), 0.37);
    const std::vector<double> s(static_cast<std::size_t>(L.N), -0.21);
    for (int k = 0; k < 60; ++k) {
      const Matrix A = random_matrix(L.N, L.m, rng, -3.0, 3.0);
      const double f = L.eval(x.data(), s.data(), A);
      const double n2 = A.frobenius_sq();
      CAPTURE(id);
      CHECK(f >= L.growth.c1 * std::pow(n2, L.growth.p / 2.0) - 1e-12);
      CHECK(f <= L.growth.c2 * (1.0 + std::pow(n2, L.growth.p / 2.0)) + 1e-12);
    }
  }
}

TEST_CASE("declared derivatives match finite differences") {
  for (const std::string& id : model_ids()) {
    const Lagrangian L = make_model(id);
    if (!L.derivative_A) continue;
    CAPTURE(id);
    const DerivativeCheckResult r = integrand_derivative_check(L, 40, 2024, 1e-6);
    CHECK(r.checked > 0);
    CHECK(r.max_rel_err < 1e-5);
  }
}

TEST_CASE("quadratic form matches its expanded identity") {
  const QuadraticForm q = make_closing_quadratic_form();
  Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    const Matrix A = random_matrix(3, 2, rng);
    double c1[3], c2[3], w[3];
    for (int i = 0; i < 3; ++i) {
      c1[i] = A(i, 0);
      c2[i] = A(i, 1);
    }
    wedge(c1, c2, w);
    const double expect = 0.5 * A.frobenius_sq() + 0.5 * w[2];
    CHECK(q.eval(A) == doctest::Approx(expect).epsilon(1e-13));
  }
  CHECK(q.eval(columns3(kE1, kE2)) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(q.eval(columns3(kE2, kE1)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(q.eval(Matrix(3, 2)) == 0.0);

  const QuadraticForm iso = make_isotropic_half_form();
  Rng rng2(4);
  for (int k = 0; k < 50; ++k) {
    const Matrix A = random_matrix(3, 2, rng2);
    CHECK(iso.eval(A) == doctest::Approx(0.5 * A.frobenius_sq()).epsilon(1e-13));
  }
}

TEST_CASE("quadratic form to lagrangian keeps values and derivatives") {
  const Lagrangian L = make_closing_quadratic_form().to_lagrangian();
  CHECK(L.m == 2);
  CHECK(L.N == 3);
  const DerivativeCheckResult r = integrand_derivative_check(L, 30, 555, 1e-6);
  CHECK(r.max_rel_err < 1e-5);
}

TEST_CASE("quadratic form file round trip and validation") {
  const std::string path = "qf_test_tmp.txt";
  {
    std::ofstream f(path);
    f << "quadraticform\na 2 2\n0.5 0\n0 0.5\nb 3 3\n1 0 0\n0 1 0\n0 0 1\n";
  }
  const QuadraticForm q = load_quadratic_form(path);
  CHECK(q.a(0, 0) == 0.5);
  CHECK(q.b.rows() == 3);
  std::remove(path.c_str());

  CHECK_THROWS_AS(load_quadratic_form("missing_file_xyz.txt"), std::invalid_argument);
  auto parse = [](const std::string& text) {
    std::istringstream is(text);
    return parse_quadratic_form(is);
  };
  CHECK_THROWS_AS(parse("wrongheader a 1 1 1 b 1 1 1"), std::invalid_argument);
  CHECK_THROWS_AS(parse("quadraticform a 1 2 1 2 b 1 1 1"), std::invalid_argument);
  CHECK_THROWS_AS(parse("quadraticform a 1 1 1 b 1 1"), std::invalid_argument);
  CHECK_THROWS_AS(parse("quadraticform a 1 1 1 b 1 1 1 junk"), std::invalid_argument);
}

TEST_CASE("asymmetric quadratic growth model is column-swap even") {
  const Lagrangian L = make_counterexample_finsler();
  Rng rng(8);
  for (int k = 0; k < 100; ++k) {
    const Matrix A = random_matrix(3, 2, rng);
    Matrix swapped(3, 2);
    for (int i = 0; i < 3; ++i) {
      swapped(i, 0) = A(i, 1);
      swapped(i, 1) = A(i, 0);
    }
    const double x[2] = {0, 0}, s[3] = {0, 0, 0};
    CHECK(L.eval(x, s, A) == doctest::Approx(L.eval(x, s, swapped)).epsilon(1e-13));
  }
}

TEST_CASE("cartan integrands: parity and linear growth bounds") {
  Rng rng(21);
  for (const CartanIntegrand& phi : {make_cartan_abs(), make_cartan_3abs(), make_cartan_noneven()}) {
    CAPTURE(phi.name);
    const double s[3] = {0, 0, 0};
    for (int k = 0; k < 100; ++k) {
      double z[3], nz[3];
      for (int i = 0; i < 3; ++i) {
        z[i] = rng.uniform(-2.0, 2.0);
        nz[i] = -z[i];
      }
      const double n = std::sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]);
      const double v = phi.phi(s, z);
      CHECK(v >= phi.m1 * n - 1e-12);
      CHECK(v <= phi.m2 * n + 1e-12);
      if (phi.even) CHECK(v == doctest::Approx(phi.phi(s, nz)).epsilon(1e-13));
    }
  }
  const CartanIntegrand odd = make_cartan_noneven();
  const double s[3] = {0, 0, 0};
  const double e3[3] = {0, 0, 1}, me3[3] = {0, 0, -1};
  CHECK(odd.phi(s, e3) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(odd.phi(s, me3) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("cutoffs rise from 0 to 1 across [1/6, 1]") {
  for (const Cutoff& eta : {quintic_smoothstep_cutoff(), linear_ramp_cutoff()}) {
    CAPTURE(eta.name);
    CHECK(eta.eval(0.0) == 0.0);
    CHECK(eta.eval(1.0 / 6.0) == 0.0);
    CHECK(eta.eval(1.0) == 1.0);
    CHECK(eta.eval(1.2) == 1.0);
    double prev = -1.0;
    for (int k = 0; k <= 60; ++k) {
      const double r = k / 50.0;
      const double v = eta.eval(r);
      CHECK(v >= prev - 1e-15);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      prev = v;
      // Derivative agrees with central differences away from the joins.
      if (std::fabs(r - 1.0 / 6.0) > 0.02 && std::fabs(r - 1.0) > 0.02 && r > 0.02) {
        const double fd = (eta.eval(r + 1e-6) - eta.eval(r - 1e-6)) / 2e-6;
        CHECK(eta.deriv(r) == doctest::Approx(fd).epsilon(1e-5));
      }
    }
  }
  // The smooth cutoff is C1 at the joins.
  const Cutoff q = quintic_smoothstep_cutoff();
  CHECK(q.deriv(1.0 / 6.0) == 0.0);
  CHECK(q.deriv(1.0) == 0.0);
}

TEST_CASE("conformality ratio tau") {
  CHECK(tau(columns3(kE1, kE2)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(tau(Matrix(3, 2)) == 1.0); // conventional value at A = 0
  const double e1s[3] = {2, 0, 0};
  CHECK(tau(columns3(kE1, e1s)) == 0.0); // rank one
  Rng rng(31);
  for (int k = 0; k < 100; ++k) {
    const Matrix A = random_matrix(3, 2, rng);
    const double t = tau(A);
    CHECK(t >= 0.0);
    CHECK(t <= 1.0 + 1e-12);
    // Scale invariance.
    Matrix B = A;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j) B(i, j) *= 1.7;
    CHECK(tau(B) == doctest::Approx(t).epsilon(1e-12));
  }
  CHECK_THROWS_AS(tau(Matrix(2, 2)), std::invalid_argument);
}

TEST_CASE("dominance function sandwich and homogeneity") {
  Rng rng(41);
  for (const Cutoff& eta : {quintic_smoothstep_cutoff(), linear_ramp_cutoff()}) {
    const DominanceFunction d = make_dominance_g(eta);
    CHECK(d.mu1 == 1.25);
    CHECK(d.mu2 == 1.5);
    const double s[3] = {0, 0, 0};
    for (int k = 0; k < 100; ++k) {
      const Matrix A = random_matrix(3, 2, rng);
      const double g = d.g(s, A);
      const double n2 = A.frobenius_sq();
      CHECK(g >= d.mu1 * n2 - 1e-12);
      CHECK(g <= d.mu2 * n2 + 1e-12);
      Matrix B = A;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) B(i, j) *= 0.6;
      CHECK(d.g(s, B) == doctest::Approx(0.36 * g).epsilon(1e-12));
    }
  }
}

TEST_CASE("dominance over the scaled length integrand") {
  const DominanceCheckResult r =
      check_dominance(make_dominance_g(quintic_smoothstep_cutoff()), make_cartan_3abs(), 400, 7);
  CHECK(r.ok);
  CHECK(r.min_gap_nonconformal > 0.0);
  CHECK(r.max_conformal_error < 1e-9);
}

TEST_CASE("dominance lagrangian wrapper has consistent derivatives") {
  const Lagrangian L = dominance_to_lagrangian(make_dominance_g(quintic_smoothstep_cutoff()));
  CHECK(L.m == 2);
  CHECK(L.N == 3);
  const DerivativeCheckResult r = integrand_derivative_check(L, 60, 99, 1e-6);
  CHECK(r.checked > 0);
  CHECK(r.max_rel_err < 1e-5);
}

TEST_CASE("coefficient families stay bounded with the declared shapes") {
  for (const SwapMode mode : {SwapMode::counteriso, SwapMode::bild, SwapMode::urbild}) {
    const CoefficientFamily fam = make_coefficient_family(mode, 6, 12345);
    CAPTURE(swap_mode_name(mode));
    REQUIRE(fam.a_n.size() == 6);
    REQUIRE(fam.b_n.size() == 6);
    CHECK(fam.entries_bounded());
    CHECK(fam.bound_M == 2.0);
    CHECK(fam.coercivity_c1 == 0.5);
    for (std::size_t n = 0; n < fam.a_n.size(); ++n) {
      if (mode != SwapMode::urbild) CHECK(fam.a_n[n] == Matrix::identity(2));
      if (mode == SwapMode::urbild) CHECK(fam.b_n[n] == Matrix::identity(3));
      // Symmetry of the perturbed factor.
      const Matrix& sym = (mode == SwapMode::urbild) ? fam.a_n[n] : fam.b_n[n];
      for (int i = 0; i < sym.rows(); ++i)
        for (int j = 0; j < sym.cols(); ++j)
          if (mode != SwapMode::counteriso)
            CHECK(sym(i, j) == doctest::Approx(sym(j, i)).epsilon(1e-15));
    }
  }
  CHECK(std::string(swap_mode_name(SwapMode::counteriso)) == "counteriso");
  CHECK(std::string(swap_mode_name(SwapMode::bild)) == "bild");
  CHECK(std::string(swap_mode_name(SwapMode::urbild)) == "urbild");
}
