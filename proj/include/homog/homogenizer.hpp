#pragma once
/**
 * @file homogenizer.hpp
 * Effective-density estimation: drive cell solves across a schedule of cube
 * sides t, extrapolate g_t to the t -> infinity limit with a least-squares
 * fit g_t ~ f_hom + C/t, and probe structural properties of the resulting
 * densities (quasiconvexity, rank-one convexity, column-permutation
 * symmetry, agreement with shrinking-oscillation Dirichlet minima).
 */

#include <cstdint>
#include <functional>
#include <vector>

#include "homog/cell_solver.hpp"

namespace homog {

struct HomSchedule {
  std::vector<double> t_values; // strictly increasing cube sides
  int nodes_per_unit = 32;      // grid cells per unit length, so larger t keeps the same sampling density
  SolveConfig solve;
};

struct CellEstimate {
  double t = 0.0;
  double energy = 0.0; // discrete g_t
  bool converged = false;
  long iterations = 0;
};

struct HomResult {
  Matrix Y;
  std::vector<CellEstimate> estimates;
  double f_hom = 0.0;        // intercept of the fit below
  double slope = 0.0;        // fitted C
  double fit_residual = 0.0; // RMS residual of the fit
  bool all_converged = false;
  bool growth_ok = false; // c1 |Y|^p <= f_hom <= c2 (1 + |Y|^p) up to fit tolerance
  const char* fit_model = "g_t ~ f_hom + C/t least squares";
};

// One cell solve per t, then the intercept fit. Requires lagrangian.periodic_x.
// Non-converged solves are kept (flagged), the fit is still produced.
HomResult estimate_f_hom(const Lagrangian& lagrangian, const Matrix& Y, const HomSchedule& schedule);

// Most negative Jensen gap mean_cells density(Y + Dphi) - density(Y) over
// seeded zero-boundary piecewise-multilinear test fields phi on the unit
// cube (single-node hats alternating with dense random interior fields).
// A result >= -tol means no quasiconvexity violation was found.
double quasiconvexity_probe(const std::function<double(const Matrix&)>& density, const Matrix& Y,
                            int samples, std::uint64_t seed);

// Most negative centered second difference of tau -> density(Y + tau a x b)
// over seeded rank-one directions, step 0.25. Negative values witness a
// rank-one convexity failure.
double rank_one_probe(const std::function<double(const Matrix&)>& density, const Matrix& Y,
                      int directions, std::uint64_t seed);

struct SymmetryReport {
  HomResult base;
  HomResult permuted;
  double difference = 0.0; // |f_hom(Y) - f_hom(Y with columns swapped)|
  double tolerance = 0.0;  // combined fit residuals + 2 % of the larger estimate
  bool pass = false;
};

// Estimate f_hom at Y and at Y with columns col_i and col_j exchanged.
SymmetryReport permutation_symmetry_check(const Lagrangian& lagrangian, const Matrix& Y, int col_i,
                                          int col_j, const HomSchedule& schedule);

struct SweepPoint {
  double epsilon = 0.0;
  double energy = 0.0;
  bool converged = false;
  long iterations = 0;
};

struct SweepReport {
  std::vector<SweepPoint> points;
  double reference = 0.0;     // f_hom estimate the sweep is compared against
  double final_rel_gap = 0.0; // |last energy - reference| / max(|reference|, 1e-12)
  bool pass = false;          // final point within 3 % of the reference
  bool all_converged = false;
};

// Minimum of the oscillating Dirichlet problem at scale epsilon equals the
// cell value g_{1/epsilon} after rescaling, so each sweep point reuses the
// cell solver at t = 1/epsilon.
SweepReport epsilon_sweep_compare(const Lagrangian& lagrangian, const Matrix& Y,
                                  const std::vector<double>& epsilons, const HomSchedule& schedule);

} // namespace homog
