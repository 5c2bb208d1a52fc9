#pragma once
/**
 * @file bump.hpp
 * Strictly column-swap-asymmetric smooth bump H on 3x2 matrices.
 *
 * Two piecewise-linear tents live on a (theta, phi) rectangle strictly
 * inside the spherical-sector parameter box
 *   D = [0, inf) x [pi/32, 7pi/32] x [-3pi/16, 3pi/16]
 * (polar angle theta from e3, azimuth phi). Tent 1 peaks at
 * (pi/6, pi/6), tent 2 at (pi/6, 0). Each is mollified with a compactly
 * supported polynomial kernel; the radial factor r passes through the
 * mollification exactly because the kernel is even per axis, so only a 2D
 * quadrature is evaluated. With F the spherical-coordinate map,
 *   h_i(p) = |p|^k (mollified tent_i)(F^{-1}(p)),
 *   H(A)   = |A|^2 h_1(A_1/|A|) h_2(A_2/|A|).
 * H is 2-homogeneous, 0 <= H(A) <= |A|^2, vanishes unless both normalized
 * columns point into the sector, and separates the probe matrix with
 * columns ((1/2, 0, sqrt(3)/2), (sqrt(3)/4, 1/4, sqrt(3)/2)) from its
 * column swap: H(swapped) > H(probe).
 */

#include <vector>

#include "homog/numerics.hpp"

namespace homog {

struct BumpParams {
  double k = 4.0;              // radial exponent, must be > 2
  double mollify_radius = 0.02;
  int quadrature_points = 24;  // Gauss-Legendre points per kernel axis
};

class BumpH {
 public:
  // Throws std::invalid_argument if the mollified tents escape the
  // parameter box or the strict two-point comparisons fail.
  explicit BumpH(const BumpParams& params = {});

  double operator()(const Matrix& A) const;

  // Mollified tent values at the two probe directions (theta = pi/6,
  // phi in {pi/6, 0}); exposed for the construction checks.
  double tent1_at_peak1() const { return m1_pp_; }
  double tent2_at_peak1() const { return m2_pp_; }
  double tent1_at_peak2() const { return m1_p0_; }
  double tent2_at_peak2() const { return m2_p0_; }

  static Matrix probe_matrix();         // columns (peak-2 dir, peak-1 dir)
  static Matrix probe_matrix_swapped();

  const BumpParams& params() const { return params_; }

 private:
  double mollified_tent(int which, double theta, double phi) const;
  double column_factor(int which, const double p[3]) const;

  BumpParams params_;
  std::vector<double> quad_x_, quad_w_; // kernel-domain nodes and weights
  double m1_pp_ = 0, m2_pp_ = 0, m1_p0_ = 0, m2_p0_ = 0;
};

BumpH build_bump_H(const BumpParams& params = {});

} // namespace homog
