#pragma once
/**
 * @file energy_models.hpp
 * Integrand types and the built-in model registry.
 *
 * A Lagrangian is f(x, s, A) with x in R^m (source point), s in R^N
 * (target value), A in R^{N x m} (gradient; rows are target components).
 * Growth bounds assert c1 |A|^p <= f(x,s,A) <= c2 (1 + |A|^p); models with
 * coercive == false declare c1 = 0 and are rejected by the solver.
 */

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "homog/numerics.hpp"

namespace homog {

struct GrowthBounds {
  double c1 = 0.0;
  double c2 = 1.0;
  double p = 2.0;
};

struct Lagrangian {
  int m = 1;
  int N = 1;
  GrowthBounds growth;
  bool periodic_x = true; // unit-periodic in every x component
  bool periodic_s = true; // unit-periodic in every s component
  bool coercive = true;

  std::function<double(const double* x, const double* s, const Matrix& A)> eval;

  // Optional analytic derivatives. When absent, the solver differentiates
  // eval by central differences in the s and A slots.
  std::function<void(const double* x, const double* s, const Matrix& A, Matrix& dA)> derivative_A;
  std::function<void(const double* x, const double* s, const Matrix& A, double* ds)> derivative_s;

  // Declared smooth locus: derivative checks only sample where this holds.
  std::function<bool(const double* x, const double* s, const Matrix& A)> smooth_at;
  std::string smooth_away_from; // description of the excluded locus

  std::string name;

  double operator()(const double* x, const double* s, const Matrix& A) const {
    return eval(x, s, A);
  }
};

// Separately quadratic form a^{alpha beta} b_{ij} A^i_alpha A^j_beta.
struct QuadraticForm {
  Matrix a; // m x m
  Matrix b; // N x N
  double eval(const Matrix& A) const;
  Lagrangian to_lagrangian() const;
};

// Structured-text format: "quadraticform" / "a <m> <m>" + rows /
// "b <N> <N>" + rows. Throws std::invalid_argument on malformed input.
QuadraticForm parse_quadratic_form(std::istream& is);
QuadraticForm load_quadratic_form(const std::string& path);

// Coefficients of the worked identity (1/2)|A|^2 + (1/2)(A_1 x A_2)_3:
// a = [[r, 1/2], [-1/2, r]], b = diag(r, r, r) with b_12 = 1/2, b_21 = -1/2,
// r = 1/sqrt(2).
QuadraticForm make_closing_quadratic_form();
// Isotropic control a = (1/2) id_2, b = id_3, equal to (1/2)|A|^2.
QuadraticForm make_isotropic_half_form();

// phi(s, z) on z in R^3 with m1 |z| <= phi(s, z) <= m2 |z|.
struct CartanIntegrand {
  std::function<double(const double* s, const double* z)> phi;
  double m1 = 0.0;
  double m2 = 1.0;
  bool even = true; // phi(s, z) == phi(s, -z)
  std::string name;
};

CartanIntegrand make_cartan_abs();     // phi = |z|
CartanIntegrand make_cartan_3abs();    // phi = 3 |z|
CartanIntegrand make_cartan_noneven(); // phi = |z| + z_3 / 2

// Cutoff eta: eta(0) = 0, eta(1) = 1, 0 < eta(r) < 1 on (1/6, 1).
struct Cutoff {
  std::string name;
  std::function<double(double)> eval;
  std::function<double(double)> deriv;
};

Cutoff quintic_smoothstep_cutoff(); // C^2, rises on [1/6, 1]
Cutoff linear_ramp_cutoff();        // piecewise linear, rises on [1/6, 1]

// tau(A) = 2 |A_1 x A_2| / |A|^2 for A in R^{3x2}; tau(0) := 1.
// tau = 1 exactly at conformal pairs (equal lengths, perpendicular).
double tau(const Matrix& A);

struct DominanceFunction {
  std::function<double(const double* s, const Matrix& A)> g;
  Cutoff eta;
  double mu1 = 0.0; // mu1 |A|^2 <= g
  double mu2 = 1.0; // g <= mu2 |A|^2
  std::string name;
};

// g(s, A) = |A|^2 + (1/2)|A|^2 (1/2 + (1/2) eta(tau(A))).
DominanceFunction make_dominance_g(const Cutoff& eta);
Lagrangian dominance_to_lagrangian(const DominanceFunction& d);

// phi(A) = |A|^2 + A(1,0) A(1,1) on R^{3x2} (0-based row 1 = second target
// component). Convex, (1/2)|A|^2 <= phi <= (3/2)|A|^2, column-swap even.
Lagrangian make_counterexample_finsler();

struct DominanceCheckResult {
  bool ok = false;
  double min_gap_nonconformal = 0.0; // min of g - f over non-conformal samples
  double max_conformal_error = 0.0;  // max |g - f| over conformal samples
  int samples = 0;
};

// Samples f(s, A) = phi(s, A_1 x A_2) <= g(s, A) with equality at
// conformal A.
DominanceCheckResult check_dominance(const DominanceFunction& g, const CartanIntegrand& phi,
                                     int samples, std::uint64_t seed);

// Sequences of constant coefficient matrices with a uniform entry bound and
// a coercivity constant.
struct CoefficientFamily {
  std::vector<Matrix> a_n; // m x m per member
  std::vector<Matrix> b_n; // N x N per member
  double bound_M = 1.0;
  double coercivity_c1 = 0.0;

  bool entries_bounded() const;
};

enum class SwapMode { counteriso, bild, urbild };
const char* swap_mode_name(SwapMode m);

// Seeded families for the three swap-invariance demonstrations:
// counteriso: b_n = scalar * id (isotropic), a_n = id;
// bild: b_n symmetric positive definite, a_n = id;
// urbild: a_n symmetric positive definite, b_n = id.
CoefficientFamily make_coefficient_family(SwapMode mode, int count, std::uint64_t seed);

// Built-in model ids: quadratic-iso, finsler-asym, dominance-3norm,
// cartan-noneven, riemannian-iso, checkerboard, layered-1d,
// nonuap-indicator. Throws std::invalid_argument on unknown ids.
Lagrangian make_model(const std::string& id);
std::vector<std::string> model_ids();

} // namespace homog
