#pragma once
/**
 * @file tiling.hpp
 * Integer-exact construction of the block partition used to compare cell
 * values at two cube sides t < s: inner boxes B_z = sigma_z + [0,t)^m with
 * sigma_z = (t+4)z + (2,...,2), collars A_z between B_z and the outer box
 * tau_z + [0,t+2)^m (tau_z = sigma_z - 1), and the remainder Q. lambda_z is
 * the unique integer vector with lambda_z - Y sigma_z in [0,1)^N.
 *
 * All set-theoretic facts (disjointness, containment, separations, the two
 * counting formulas) are decidable in integer arithmetic and verified by
 * exhaustive unit-pixel enumeration. patch_field assembles the comparison
 * field on (0,s)^m from a zero-boundary field on (0,t)^m: exact shifted
 * copies on the B_z, a multilinear ramp to zero across each collar, zero on
 * Q. verify_subadditivity chains the resulting energies.
 */

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "homog/cell_solver.hpp"
#include "homog/report.hpp"

namespace homog {

struct TilingParams {
  std::int64_t t = 1;
  std::int64_t s = 6; // requires s > t + 4
  int m = 1;
  Matrix Y; // N x m
};

struct TilingBlock {
  std::vector<std::int64_t> z;
  std::vector<std::int64_t> sigma;  // (t+4) z + 2
  std::vector<std::int64_t> tau;    // sigma - 1
  std::vector<std::int64_t> lambda; // integer offset, lambda - Y sigma in [0,1)^N
};

struct Tiling {
  TilingParams params;
  std::int64_t per_axis = 0; // floor(s / (t+4))
  std::vector<TilingBlock> blocks;

  std::int64_t index_count() const { return static_cast<std::int64_t>(blocks.size()); }
  // s^m - (t+2)^m * per_axis^m
  std::int64_t remainder_measure() const;
};

// Throws std::invalid_argument unless s > t + 4, t >= 1, 1 <= m <= 8, and
// Y has m columns.
Tiling build_tiling(const TilingParams& params);

// Exact integer checks: counting formulas, containment of the outer boxes
// in (0,s)^m, pairwise sup-norm separations (sigma-sigma and tau-tau
// >= t+3, sigma-tau >= t+2), pixel-enumerated disjointness and remainder
// measure, and the lambda offset window.
VerificationReport verify_tiling(const Tiling& tiling);

// Structured text listing, diffable against golden files.
void dump_tiling(const Tiling& tiling, std::ostream& os);

// u_t lives on (0,t)^m, the result on (0,s)^m given by grid_s. Both grids
// must share an integer number of cells per unit length. Throws
// std::invalid_argument on misaligned grids.
GridField patch_field(const GridField& u_t, const Tiling& tiling, const Grid& grid_s);

struct SubadditivityResult {
  double g_t = 0.0;            // discrete cell value at side t
  double patched_energy = 0.0; // normalized energy of the patched field on (0,s)^m
  double g_s = 0.0;            // discrete cell value at side s
  double bound = 0.0;          // remainder + collar + block majorant, see below
  double collar_energy = 0.0;  // directly computed collar share of patched_energy
  double collar_gradient_sup = 0.0;
  VerificationReport report;
};

// Solves at side t, patches the minimizer to side s, solves at side s, and
// checks g_s <= patched energy <= bound with
//   bound = (1 - ((t+2)/(t+4) - (t+2)/s)^m) c2 (1 + |Y|^p)
//         + collar_energy + (t/(t+4))^m (g_t + 1/t).
SubadditivityResult verify_subadditivity(const Lagrangian& lagrangian, const Matrix& Y,
                                         std::int64_t t, std::int64_t s,
                                         const SolveConfig& solve_config, int nodes_per_unit);

} // namespace homog
