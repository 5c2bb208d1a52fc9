#include "homog/bump.hpp"

#include <cmath>
#include <stdexcept>

namespace homog {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Sector parameter box angles.
constexpr double kThetaBoxLo = kPi / 32.0;
constexpr double kThetaBoxHi = 7.0 * kPi / 32.0;
constexpr double kPhiBox = 3.0 * kPi / 16.0;

// Tent geometry. The phi support is kept strictly inside the phi box so a
// positive mollification radius exists; both peaks sit inside the support.
constexpr double kThetaLo = kPi / 16.0;
constexpr double kThetaHi = 3.0 * kPi / 16.0;
constexpr double kThetaPeak = kPi / 6.0;
constexpr double kPhiSup = 0.56;
constexpr double kPhiPeak1 = kPi / 6.0;
constexpr double kPhiPeak2 = 0.0;

double hat(double x, double lo, double peak, double hi) {
  if (x <= lo || x >= hi) return 0.0;
  return x <= peak ? (x - lo) / (peak - lo) : (hi - x) / (hi - peak);
}

double theta_hat(double t) { return hat(t, kThetaLo, kThetaPeak, kThetaHi); }

double phi_hat(int which, double p) {
  const double peak = which == 1 ? kPhiPeak1 : kPhiPeak2;
  return hat(p, -kPhiSup, peak, kPhiSup);
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double p1 = 0.0, p0 = 0.0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::fabs(dt) < 1e-15) break;
    }
    p0 = 1.0;
    p1 = t;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (t * p1 - p0) / (t * t - 1.0);
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

} // namespace

BumpH::BumpH(const BumpParams& params) : params_(params) {
  if (!(params_.k > 2.0))
    throw std::invalid_argument("BumpH: radial exponent k must exceed 2");
  if (!(params_.mollify_radius > 0.0))
    throw std::invalid_argument("BumpH: mollify_radius must be positive");
  if (params_.quadrature_points < 4)
    throw std::invalid_argument("BumpH: need at least 4 quadrature points");

  const double eps = params_.mollify_radius;
  const bool inside = (kThetaLo - eps > kThetaBoxLo) && (kThetaHi + eps < kThetaBoxHi) &&
                      (kPhiSup + eps < kPhiBox);
  if (!inside)
    throw std::invalid_argument(
        "BumpH: mollified tent support escapes the sector parameter box; "
        "reduce mollify_radius");

  // Kernel C (1 - u^2)^3 on [-1, 1], C = 35/32, scaled to [-eps, eps].
  // Nodes are eps * x_i; weights fold in the kernel so each 1D sum is a
  // convolution with total mass exactly 1 (the integrand is degree 6).
  std::vector<double> gx, gw;
  gauss_legendre(params_.quadrature_points, gx, gw);
  quad_x_.resize(gx.size());
  quad_w_.resize(gx.size());
  for (std::size_t i = 0; i < gx.size(); ++i) {
    quad_x_[i] = eps * gx[i];
    const double u = 1.0 - gx[i] * gx[i];
    quad_w_[i] = gw[i] * (35.0 / 32.0) * u * u * u;
  }

  m1_pp_ = mollified_tent(1, kThetaPeak, kPhiPeak1);
  m2_pp_ = mollified_tent(2, kThetaPeak, kPhiPeak1);
  m1_p0_ = mollified_tent(1, kThetaPeak, kPhiPeak2);
  m2_p0_ = mollified_tent(2, kThetaPeak, kPhiPeak2);

  const bool separated = m1_pp_ > m2_pp_ && m2_p0_ > m1_p0_ && m1_pp_ > 0.0 && m2_p0_ > 0.0;
  if (!separated)
    throw std::invalid_argument(
        "BumpH: strict two-point comparisons of the mollified tents failed");
}

double BumpH::mollified_tent(int which, double theta, double phi) const {
  // Product kernel and product tent: the 2D convolution factorizes.
  double t_acc = 0.0, p_acc = 0.0;
  for (std::size_t i = 0; i < quad_x_.size(); ++i) {
    t_acc += quad_w_[i] * theta_hat(theta - quad_x_[i]);
    p_acc += quad_w_[i] * phi_hat(which, phi - quad_x_[i]);
  }
  return t_acc * p_acc;
}

double BumpH::column_factor(int which, const double p[3]) const {
  const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  if (r < 1e-14) return 0.0;
  double c = p[2] / r;
  c = std::min(1.0, std::max(-1.0, c));
  const double theta = std::acos(c);
  const double eps = params_.mollify_radius;
  if (theta < kThetaLo - eps || theta > kThetaHi + eps) return 0.0;
  const double phi = std::atan2(p[1], p[0]);
  if (std::fabs(phi) > kPhiSup + eps) return 0.0;
  // |p|^k times the mollified g_i = r * tent_i evaluated at radius |p|.
  return std::pow(r, params_.k + 1.0) * mollified_tent(which, theta, phi);
}

double BumpH::operator()(const Matrix& A) const {
  if (A.rows() != 3 || A.cols() != 2)
    throw std::invalid_argument("BumpH: expected a 3x2 matrix");
  const double S = A.frobenius_sq();
  if (S == 0.0) return 0.0;
  const double norm = std::sqrt(S);
  double p1[3], p2[3];
  for (int i = 0; i < 3; ++i) {
    p1[i] = A(i, 0) / norm;
    p2[i] = A(i, 1) / norm;
  }
  return S * column_factor(1, p1) * column_factor(2, p2);
}

Matrix BumpH::probe_matrix() {
  const double s3 = std::sqrt(3.0);
  Matrix D(3, 2);
  D(0, 0) = 0.5;
  D(1, 0) = 0.0;
  D(2, 0) = s3 / 2.0;
  D(0, 1) = s3 / 4.0;
  D(1, 1) = 0.25;
  D(2, 1) = s3 / 2.0;
  return D;
}

Matrix BumpH::probe_matrix_swapped() {
  Matrix D = probe_matrix();
  Matrix Ds(3, 2);
  for (int i = 0; i < 3; ++i) {
    Ds(i, 0) = D(i, 1);
    Ds(i, 1) = D(i, 0);
  }
  return Ds;
}

BumpH build_bump_H(const BumpParams& params) { return BumpH(params); }

} // namespace homog
