#pragma once
/**
 * @file cell_solver.hpp
 * Discrete cell problems on (0, t)^m: minimize the normalized energy
 *   E(u) = (1/t^m) sum_cells h^m f(x_c, ubar_c + Y x_c, G_c + Y)
 * over node fields u with zero boundary, where x_c is the cell midpoint,
 * ubar_c the corner average, and G_c the corner-difference gradient.
 *
 * Minimization is plain gradient descent with Armijo backtracking, started
 * from the zero field plus seeded random restarts. Identical
 * (problem, config, seed) produce bit-identical results on a platform;
 * the energy decreases monotonically along each run.
 */

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "homog/energy_models.hpp"
#include "homog/numerics.hpp"

namespace homog {

// Non-finite integrand value during quadrature, tagged with the cell.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::int64_t cell)
      : std::runtime_error(what), cell_(cell) {}
  std::int64_t cell() const { return cell_; }

 private:
  std::int64_t cell_;
};

struct CellProblem {
  Lagrangian lagrangian;
  Matrix Y;  // N x m affine slope
  Grid grid; // on (0, t)^m, t = grid.side_length
};

struct SolveConfig {
  long max_iterations = 5000;
  double gradient_tolerance = 1e-7; // sup-norm of the energy gradient
  int restarts = 0;
  double init_scale = 0.1; // amplitude of random restart fields
  std::uint64_t seed = 0;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  double initial_step = 1.0;
  int max_backtracks = 60;
};

struct CellSolution {
  double energy = 0.0;
  GridField minimizer;
  long iterations_used = 0; // total over all runs
  bool converged = false;   // of the best run
  bool line_search_failed = false;
  std::vector<double> restart_energies; // final energy per run; run 0 = zero start
};

void validate_problem(const CellProblem& p);

double cell_energy(const CellProblem& p, const GridField& u);

// Analytic when the Lagrangian provides derivatives, otherwise central
// finite differences of eval in the s and A slots. Boundary entries are
// zeroed (the boundary is fixed).
void cell_energy_gradient(const CellProblem& p, const GridField& u, std::vector<double>& grad);

CellSolution minimize(const CellProblem& p, const SolveConfig& cfg);

struct GradientCheckResult {
  double max_rel_err = 0.0;
  int checked = 0;
};

// Total-energy gradient vs central differences on <= max_coords seeded
// interior coordinates.
GradientCheckResult gradient_check(const CellProblem& p, const GridField& u, double fd_eps,
                                   int max_coords, std::uint64_t seed);

struct DerivativeCheckResult {
  double max_rel_err = 0.0;
  int checked = 0;
  int skipped_nonsmooth = 0;
};

// Integrand-level check of derivative_A / derivative_s against central
// differences at seeded (x, s, A) samples away from the declared
// non-smooth locus.
DerivativeCheckResult integrand_derivative_check(const Lagrangian& L, int samples,
                                                 std::uint64_t seed, double fd_eps);

} // namespace homog
