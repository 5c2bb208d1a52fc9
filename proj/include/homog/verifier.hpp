#pragma once
/**
 * @file verifier.hpp
 * Mechanical checks for the impossibility arguments: coefficient-product
 * limit systems with certified infeasibility margins, the relative-density
 * failure of the integer-translation set, coordinate-swap invariance of
 * quadratic energies, the dominance value identities, the Cartan parity
 * obstruction, and the closing worked-example identity.
 *
 * Every check returns a VerificationReport whose clauses echo the evaluated
 * sub-expressions, so each margin is recomputable from the report alone.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "homog/energy_models.hpp"
#include "homog/numerics.hpp"
#include "homog/report.hpp"

namespace homog {

// One degree-2 monomial coeff * a[a_idx] * b[b_idx].
struct ProductTerm {
  double coeff = 1.0;
  int a_idx = 0;
  int b_idx = 0;
};

// Sum of monomials required to take a prescribed limit value.
struct ProductConstraint {
  std::vector<ProductTerm> terms;
  double target = 0.0;
  std::string label;
};

// A system of bilinear limit constraints in unknowns a[.] and b[.].
//
// chain_weights, when non-empty, holds one weight per constraint such that
// sum_k w_k * expr_k(a, b) == 0 identically in the unknowns. Writing
// r_k = expr_k - target_k this forces, for every assignment,
//   ||r||_2 >= |sum_k w_k target_k| / ||w||_2,
// which is the hand-derived infeasibility certificate for the built-in
// systems carrying it.
struct ProductConstraintSystem {
  std::string name;
  std::vector<std::string> a_names;
  std::vector<std::string> b_names;
  std::vector<ProductConstraint> constraints;
  bool expect_infeasible = true;
  double declared_margin = 0.0; // certified lower bound on the L2 residual
  std::vector<double> chain_weights;

  // Value of constraint k at the assignment (a, b).
  double constraint_value(int k, const std::vector<double>& a,
                          const std::vector<double>& b) const;
  // Euclidean norm of the residual vector at the assignment (a, b).
  double residual_norm(const std::vector<double>& a,
                       const std::vector<double>& b) const;
};

// {a11 b11 = 1, a11 b22 = 1, a22 b11 = 1, a22 b22 = 1,
//  (a12 + a21) b11 = 0, (a12 + a21) b22 = 1}. Infeasible: the first pair
// forces b11 = b22 while the last pair forces |b22| >= 3 |b11|.
ProductConstraintSystem finsler_product_system();

// The eleven probe expansions behind the parity obstruction, with the two
// orientation targets phi(e1) and phi(-e1) taken from the given integrand
// at s = 0. Carries the exact linear certificate with weight norm sqrt(51).
ProductConstraintSystem cartan_product_system(const CartanIntegrand& phi);

// The seven probe values of the dominance comparison; the last target is
// 15/4 + (3/4) eta(2 sqrt(2)/3) while the certificate combination of the
// first six is eta-independent and equals 19/4.
ProductConstraintSystem dominance_product_system(const Cutoff& eta);

// {a11 b11 = 1, a11 b22 = 2}: solvable, guards against false infeasibility.
ProductConstraintSystem feasible_control_system();

struct ProductSolveResult {
  double best_residual = 0.0;
  std::vector<double> best_a;
  std::vector<double> best_b;
  std::vector<double> start_residuals; // final residual of every start
};

// Seeded multistart alternating least squares over the bilinear system.
// Throws std::invalid_argument on an empty system or starts < 1.
ProductSolveResult solve_product_system(const ProductConstraintSystem& sys,
                                        int starts, std::uint64_t seed);

// Clauses: multistart residual floor against declared_margin (or residual
// < 1e-8 for feasible controls), the hard-coded implication chain of the
// built-in systems, and a structural scan for unreferenced unknowns.
VerificationReport product_system_infeasibility(const ProductConstraintSystem& sys,
                                                int starts = 64,
                                                std::uint64_t seed = 0);

// Clauses: phi(s, e1) > 0, phi(s, -e1) > 0, and the parity margin
// phi(e1) + phi(-e1), which would have to vanish for any integrand
// reachable by the quadratic approximations.
VerificationReport cartan_parity_check(const CartanIntegrand& phi);

// The 2x2 matrix with rows (1, 1) and (sqrt(2), sqrt(2)) used by the
// translation-set construction.
Matrix relative_density_builtin_Y();

// Checks that the integer-translation set {tau : Y tau in Z^2} fails to be
// relatively dense: membership witnesses, the antidiagonal characterization
// on an enumerated window, and the closed-form uncovered probe (2L, 2L).
// Requires the built-in Y; throws std::invalid_argument otherwise, or when
// eta is outside (0, 1) or inclusion_length <= 0.
VerificationReport relative_density_check(const Matrix& Y, double eta,
                                          double inclusion_length);

// Coordinate-swap demonstration. Clause (i): the integrand separates the
// fields u1(x) = (x1, x2, 0) and u2(x) = (x2, x1, 0) by quadrature on the
// given grid. Clause (ii): no member of the coefficient family can, since
// its discrete energy is invariant (bitwise on the square grid) under the
// swap that exchanges the two fields: the domain-coordinate swap for the
// isotropic and target-metric modes, the target-component swap for the
// source-metric mode. Throws std::invalid_argument on a mode/family shape
// mismatch or a non-2D grid.
VerificationReport swap_contradiction_demo(SwapMode mode, const Lagrangian& integrand,
                                           const CoefficientFamily& family,
                                           const Grid& grid);

// Clauses: g(e1 | e2 + e3) = 15/4 + (3/4) eta(2 sqrt(2)/3); the six-term
// combination equals 19/4 independently of eta; equating the two forces
// eta = 4/3 > 1, impossible for an admissible cutoff.
VerificationReport dominance_identity_check(const DominanceFunction& g);

// Quadrature of |Du|^2 for u(x) = (x1 + x2)(1, 1, 1) over a rectangle of
// the given measure: the value is 6 * measure, and the |z| Cartan term
// vanishes (parallel gradient columns). Throws on measure <= 0.
VerificationReport lsc_energy_check(double domain_measure);

// The closing worked example: the quadratic form with 1/sqrt(2) diagonal
// and +-1/2 skew entries equals (1/2)|A|^2 + (1/2)(A_1 x A_2)_3 pointwise,
// while the isotropic control form reproduces (1/2)|A|^2.
VerificationReport closing_example_identity(int samples, std::uint64_t seed);

} // namespace homog
