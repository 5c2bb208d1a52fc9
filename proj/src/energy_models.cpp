#include "homog/energy_models.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <stdexcept>

#include "homog/rng.hpp"

namespace homog {

namespace {

double frac(double x) { return x - std::floor(x); }

void column3(const Matrix& A, int j, double out[3]) {
  out[0] = A(0, j);
  out[1] = A(1, j);
  out[2] = A(2, j);
}

void require_3x2(const Matrix& A, const char* who) {
  if (A.rows() != 3 || A.cols() != 2)
    throw std::invalid_argument(std::string(who) + ": expected a 3x2 matrix");
}

} // namespace

// ------------------------------------------------------------ quadratics ---

double QuadraticForm::eval(const Matrix& A) const {
  const int m = a.rows(), N = b.rows();
  double q = 0.0;
  for (int al = 0; al < m; ++al)
    for (int be = 0; be < m; ++be) {
      if (a(al, be) == 0.0) continue;
      double inner = 0.0;
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) inner += b(i, j) * A(i, al) * A(j, be);
      q += a(al, be) * inner;
    }
  return q;
}

Lagrangian QuadraticForm::to_lagrangian() const {
  if (a.rows() != a.cols() || b.rows() != b.cols())
    throw std::invalid_argument("QuadraticForm: a and b must be square");
  Lagrangian L;
  L.m = a.rows();
  L.N = b.rows();
  L.name = "quadratic-form";
  QuadraticForm q = *this;
  L.eval = [q](const double*, const double*, const Matrix& A) { return q.eval(A); };
  L.derivative_A = [q](const double*, const double*, const Matrix& A, Matrix& dA) {
    const int m = q.a.rows(), N = q.b.rows();
    for (int k = 0; k < N; ++k)
      for (int ga = 0; ga < m; ++ga) {
        double acc = 0.0;
        for (int be = 0; be < m; ++be)
          for (int j = 0; j < N; ++j) acc += q.a(ga, be) * q.b(k, j) * A(j, be);
        for (int al = 0; al < m; ++al)
          for (int i = 0; i < N; ++i) acc += q.a(al, ga) * q.b(i, k) * A(i, al);
        dA(k, ga) = acc;
      }
  };
  L.derivative_s = [](const double*, const double*, const Matrix&, double* ds) { ds[0] = 0.0; };
  // Growth constants from entry bounds; a custom form need not be coercive.
  double amax = 0.0, bmax = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) amax = std::max(amax, std::fabs(a(i, j)));
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) bmax = std::max(bmax, std::fabs(b(i, j)));
  L.growth = {0.0, amax * bmax * L.m * L.N, 2.0};
  L.coercive = false;
  return L;
}

QuadraticForm parse_quadratic_form(std::istream& is) {
  std::string tag;
  if (!(is >> tag) || tag != "quadraticform")
    throw std::invalid_argument("quadratic form file: missing 'quadraticform' header");
  auto read_block = [&is](const std::string& want) {
    std::string key;
    int r = 0, c = 0;
    if (!(is >> key >> r >> c) || key != want || r < 1 || c < 1 || r != c)
      throw std::invalid_argument("quadratic form file: bad '" + want + "' block");
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j)
        if (!(is >> m(i, j)))
          throw std::invalid_argument("quadratic form file: short '" + want + "' block");
    return m;
  };
  QuadraticForm q;
  q.a = read_block("a");
  q.b = read_block("b");
  std::string extra;
  if (is >> extra)
    throw std::invalid_argument("quadratic form file: trailing content '" + extra + "'");
  return q;
}

QuadraticForm load_quadratic_form(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open quadratic form file: " + path);
  return parse_quadratic_form(f);
}

QuadraticForm make_closing_quadratic_form() {
  const double r = 0.70710678118654752440;
  QuadraticForm q;
  q.a = Matrix(2, 2);
  q.a(0, 0) = r;
  q.a(0, 1) = 0.5;
  q.a(1, 0) = -0.5;
  q.a(1, 1) = r;
  q.b = Matrix(3, 3);
  q.b(0, 0) = r;
  q.b(1, 1) = r;
  q.b(2, 2) = r;
  q.b(0, 1) = 0.5;
  q.b(1, 0) = -0.5;
  return q;
}

QuadraticForm make_isotropic_half_form() {
  QuadraticForm q;
  q.a = Matrix(2, 2);
  q.a(0, 0) = 0.5;
  q.a(1, 1) = 0.5;
  q.b = Matrix::identity(3);
  return q;
}

// ---------------------------------------------------------------- cartan ---

namespace {
double norm3(const double z[3]) {
  return std::sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]);
}
} // namespace

CartanIntegrand make_cartan_abs() {
  CartanIntegrand c;
  c.phi = [](const double*, const double* z) { return norm3(z); };
  c.m1 = 1.0;
  c.m2 = 1.0;
  c.even = true;
  c.name = "cartan-abs";
  return c;
}

CartanIntegrand make_cartan_3abs() {
  CartanIntegrand c;
  c.phi = [](const double*, const double* z) { return 3.0 * norm3(z); };
  c.m1 = 3.0;
  c.m2 = 3.0;
  c.even = true;
  c.name = "cartan-3abs";
  return c;
}

CartanIntegrand make_cartan_noneven() {
  CartanIntegrand c;
  c.phi = [](const double*, const double* z) { return norm3(z) + 0.5 * z[2]; };
  c.m1 = 0.5;
  c.m2 = 1.5;
  c.even = false;
  c.name = "cartan-noneven-phi";
  return c;
}

// --------------------------------------------------------------- cutoffs ---

Cutoff quintic_smoothstep_cutoff() {
  Cutoff c;
  c.name = "quintic-smoothstep";
  c.eval = [](double r) {
    double x = (r - 1.0 / 6.0) / (5.0 / 6.0);
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
  };
  c.deriv = [](double r) {
    double x = (r - 1.0 / 6.0) / (5.0 / 6.0);
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return 30.0 * x * x * (1.0 - x) * (1.0 - x) * (6.0 / 5.0);
  };
  return c;
}

Cutoff linear_ramp_cutoff() {
  Cutoff c;
  c.name = "linear-ramp";
  c.eval = [](double r) {
    double x = (r - 1.0 / 6.0) / (5.0 / 6.0);
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return x;
  };
  c.deriv = [](double r) {
    double x = (r - 1.0 / 6.0) / (5.0 / 6.0);
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return 6.0 / 5.0;
  };
  return c;
}

// ------------------------------------------------------------- dominance ---

double tau(const Matrix& A) {
  require_3x2(A, "tau");
  const double S = A.frobenius_sq();
  if (S == 0.0) return 1.0;
  double c1[3], c2[3], w[3];
  column3(A, 0, c1);
  column3(A, 1, c2);
  wedge(c1, c2, w);
  return 2.0 * norm3(w) / S;
}

DominanceFunction make_dominance_g(const Cutoff& eta) {
  DominanceFunction d;
  d.eta = eta;
  d.mu1 = 1.25;
  d.mu2 = 1.5;
  d.name = "dominance-3norm(" + eta.name + ")";
  Cutoff e = eta;
  d.g = [e](const double*, const Matrix& A) {
    const double S = A.frobenius_sq();
    return S * (1.25 + 0.25 * e.eval(tau(A)));
  };
  return d;
}

Lagrangian dominance_to_lagrangian(const DominanceFunction& d) {
  Lagrangian L;
  L.m = 2;
  L.N = 3;
  L.name = d.name;
  L.growth = {d.mu1, d.mu2, 2.0};
  DominanceFunction dd = d;
  L.eval = [dd](const double*, const double* s, const Matrix& A) { return dd.g(s, A); };
  L.derivative_A = [dd](const double*, const double*, const Matrix& A, Matrix& dA) {
    const double S = A.frobenius_sq();
    double c1[3], c2[3], w[3];
    column3(A, 0, c1);
    column3(A, 1, c2);
    wedge(c1, c2, w);
    const double wn = norm3(w);
    const double t = (S == 0.0) ? 1.0 : 2.0 * wn / S;
    const double eta = dd.eta.eval(t);
    const double deta = dd.eta.deriv(t);
    const double outer = 2.0 * (1.25 + 0.25 * eta);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j) dA(i, j) = outer * A(i, j);
    if (deta != 0.0 && wn > 0.0 && S > 0.0) {
      const double c = 0.25 * S * deta;
      const double wh[3] = {w[0] / wn, w[1] / wn, w[2] / wn};
      double d1[3], d2[3];
      wedge(c2, wh, d1); // d|w|/dA_1
      wedge(wh, c1, d2); // d|w|/dA_2
      const double k1 = 2.0 / S, k2 = 4.0 * wn / (S * S);
      for (int i = 0; i < 3; ++i) {
        dA(i, 0) += c * (k1 * d1[i] - k2 * A(i, 0));
        dA(i, 1) += c * (k1 * d2[i] - k2 * A(i, 1));
      }
    }
  };
  L.derivative_s = [](const double*, const double*, const Matrix&, double* ds) {
    ds[0] = ds[1] = ds[2] = 0.0;
  };
  L.smooth_away_from = "A near 0 and tau(A) near the cutoff joins 1/6 and 1";
  L.smooth_at = [](const double*, const double*, const Matrix& A) {
    const double S = A.frobenius_sq();
    if (S < 1e-2) return false;
    const double t = tau(A);
    return std::fabs(t - 1.0 / 6.0) > 0.05 && t < 0.95;
  };
  return L;
}

Lagrangian make_counterexample_finsler() {
  Lagrangian L;
  L.m = 2;
  L.N = 3;
  L.name = "finsler-asym";
  L.growth = {0.5, 2.0, 2.0};
  L.eval = [](const double*, const double*, const Matrix& A) {
    return A.frobenius_sq() + A(1, 0) * A(1, 1);
  };
  L.derivative_A = [](const double*, const double*, const Matrix& A, Matrix& dA) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j) dA(i, j) = 2.0 * A(i, j);
    dA(1, 0) += A(1, 1);
    dA(1, 1) += A(1, 0);
  };
  L.derivative_s = [](const double*, const double*, const Matrix&, double* ds) {
    ds[0] = ds[1] = ds[2] = 0.0;
  };
  return L;
}

DominanceCheckResult check_dominance(const DominanceFunction& g, const CartanIntegrand& phi,
                                     int samples, std::uint64_t seed) {
  Rng rng(seed);
  DominanceCheckResult res;
  res.samples = samples;
  res.min_gap_nonconformal = 1e300;
  const double s0[3] = {0.0, 0.0, 0.0};
  bool gap_positive = true;
  for (int k = 0; k < samples; ++k) {
    Matrix A(3, 2);
    const double scale = rng.uniform(0.1, 2.0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j) A(i, j) = scale * rng.normal();
    double c1[3], c2[3], w[3];
    column3(A, 0, c1);
    column3(A, 1, c2);
    wedge(c1, c2, w);
    const double f = phi.phi(s0, w);
    const double gv = g.g(s0, A);
    const double gap = gv - f;
    if (gap < -1e-12) gap_positive = false;
    if (tau(A) < 0.999)
      res.min_gap_nonconformal = std::min(res.min_gap_nonconformal, gap);
  }
  // Conformal pairs: equal-length perpendicular columns, where g must equal f.
  for (int k = 0; k < samples; ++k) {
    double v1[3], v2[3];
    for (int i = 0; i < 3; ++i) v1[i] = rng.normal();
    const double n1 = norm3(v1);
    for (int i = 0; i < 3; ++i) v1[i] /= n1;
    for (int i = 0; i < 3; ++i) v2[i] = rng.normal();
    double proj = v1[0] * v2[0] + v1[1] * v2[1] + v1[2] * v2[2];
    for (int i = 0; i < 3; ++i) v2[i] -= proj * v1[i];
    const double n2 = norm3(v2);
    for (int i = 0; i < 3; ++i) v2[i] /= n2;
    const double c = rng.uniform(0.2, 2.0);
    Matrix A(3, 2);
    for (int i = 0; i < 3; ++i) {
      A(i, 0) = c * v1[i];
      A(i, 1) = c * v2[i];
    }
    double a1[3], a2[3], w[3];
    column3(A, 0, a1);
    column3(A, 1, a2);
    wedge(a1, a2, w);
    const double f = phi.phi(s0, w);
    const double gv = g.g(s0, A);
    res.max_conformal_error = std::max(res.max_conformal_error, std::fabs(gv - f));
  }
  res.ok = gap_positive && res.min_gap_nonconformal > 0.0 && res.max_conformal_error < 1e-9;
  return res;
}

// -------------------------------------------------------------- families ---

bool CoefficientFamily::entries_bounded() const {
  auto ok = [this](const Matrix& m) {
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        if (std::fabs(m(i, j)) > bound_M) return false;
    return true;
  };
  for (const auto& m : a_n)
    if (!ok(m)) return false;
  for (const auto& m : b_n)
    if (!ok(m)) return false;
  return true;
}

const char* swap_mode_name(SwapMode m) {
  switch (m) {
    case SwapMode::counteriso: return "counteriso";
    case SwapMode::bild: return "bild";
    case SwapMode::urbild: return "urbild";
  }
  return "?";
}

CoefficientFamily make_coefficient_family(SwapMode mode, int count, std::uint64_t seed) {
  Rng rng(seed);
  CoefficientFamily fam;
  fam.bound_M = 2.0;
  fam.coercivity_c1 = 0.5;
  for (int n = 0; n < count; ++n) {
    Matrix a = Matrix::identity(2);
    Matrix b = Matrix::identity(3);
    switch (mode) {
      case SwapMode::counteriso: {
        const double lam = rng.uniform(0.5, 2.0);
        b = Matrix(3, 3);
        for (int i = 0; i < 3; ++i) b(i, i) = lam;
        break;
      }
      case SwapMode::bild: {
        // b = 0.5 id + v v^T with |v| <= 1: symmetric, eigenvalues in [0.5, 1.5].
        double v[3];
        for (double& x : v) x = rng.normal();
        const double n3 = norm3(v);
        const double s = rng.uniform(0.2, 1.0) / (n3 > 0 ? n3 : 1.0);
        b = Matrix(3, 3);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) b(i, j) = (i == j ? 0.5 : 0.0) + s * v[i] * s * v[j];
        break;
      }
      case SwapMode::urbild: {
        double v[2] = {rng.normal(), rng.normal()};
        const double n2 = std::sqrt(v[0] * v[0] + v[1] * v[1]);
        const double s = rng.uniform(0.2, 1.0) / (n2 > 0 ? n2 : 1.0);
        a = Matrix(2, 2);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) a(i, j) = (i == j ? 0.5 : 0.0) + s * v[i] * s * v[j];
        break;
      }
    }
    fam.a_n.push_back(a);
    fam.b_n.push_back(b);
  }
  return fam;
}

// -------------------------------------------------------------- registry ---

namespace {

Lagrangian make_quadratic_iso() {
  Lagrangian L;
  L.m = 2;
  L.N = 2;
  L.name = "quadratic-iso";
  L.growth = {1.0, 1.0, 2.0};
  L.eval = [](const double*, const double*, const Matrix& A) { return A.frobenius_sq(); };
  L.derivative_A = [](const double*, const double*, const Matrix& A, Matrix& dA) {
    for (int i = 0; i < A.rows(); ++i)
      for (int j = 0; j < A.cols(); ++j) dA(i, j) = 2.0 * A(i, j);
  };
  L.derivative_s = [](const double*, const double*, const Matrix& A, double* ds) {
    for (int i = 0; i < A.rows(); ++i) ds[i] = 0.0;
  };
  return L;
}

Lagrangian make_cartan_noneven_model() {
  // Worked identity integrand: (1/2)|A|^2 + (1/2)(A_1 x A_2)_3. Strictly
  // column-swap asymmetric: 3/2 at (e1|e2), 1/2 at (e2|e1).
  Lagrangian L;
  L.m = 2;
  L.N = 3;
  L.name = "cartan-noneven";
  L.growth = {0.25, 0.75, 2.0};
  L.eval = [](const double*, const double*, const Matrix& A) {
    const double w3 = A(0, 0) * A(1, 1) - A(1, 0) * A(0, 1);
    return 0.5 * A.frobenius_sq() + 0.5 * w3;
  };
  L.derivative_A = [](const double*, const double*, const Matrix& A, Matrix& dA) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j) dA(i, j) = A(i, j);
    dA(0, 0) += 0.5 * A(1, 1);
    dA(1, 1) += 0.5 * A(0, 0);
    dA(1, 0) -= 0.5 * A(0, 1);
    dA(0, 1) -= 0.5 * A(1, 0);
  };
  L.derivative_s = [](const double*, const double*, const Matrix&, double* ds) {
    ds[0] = ds[1] = ds[2] = 0.0;
  };
  return L;
}

Lagrangian make_riemannian_iso() {
  Lagrangian L;
  L.m = 2;
  L.N = 2;
  L.name = "riemannian-iso";
  L.growth = {0.5, 2.5, 2.0};
  const double two_pi = 6.283185307179586476925286766559;
  L.eval = [two_pi](const double*, const double* s, const Matrix& A) {
    return (1.5 + std::cos(two_pi * s[0])) * A.frobenius_sq();
  };
  L.derivative_A = [two_pi](const double*, const double* s, const Matrix& A, Matrix& dA) {
    const double b = 1.5 + std::cos(two_pi * s[0]);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) dA(i, j) = 2.0 * b * A(i, j);
  };
  L.derivative_s = [two_pi](const double*, const double* s, const Matrix& A, double* ds) {
    ds[0] = -two_pi * std::sin(two_pi * s[0]) * A.frobenius_sq();
    ds[1] = 0.0;
  };
  return L;
}

Lagrangian make_checkerboard() {
  Lagrangian L;
  L.m = 2;
  L.N = 1;
  L.name = "checkerboard";
  L.growth = {1.0, 2.0, 2.0};
  auto coeff = [](const double* x) {
    const int parity = (static_cast<int>(std::floor(2.0 * frac(x[0]))) +
                        static_cast<int>(std::floor(2.0 * frac(x[1])))) & 1;
    return parity == 0 ? 1.0 : 2.0;
  };
  L.eval = [coeff](const double* x, const double*, const Matrix& A) {
    return coeff(x) * A.frobenius_sq();
  };
  L.derivative_A = [coeff](const double* x, const double*, const Matrix& A, Matrix& dA) {
    const double a = coeff(x);
    for (int j = 0; j < 2; ++j) dA(0, j) = 2.0 * a * A(0, j);
  };
  L.derivative_s = [](const double*, const double*, const Matrix&, double* ds) { ds[0] = 0.0; };
  return L;
}

Lagrangian make_layered_1d() {
  Lagrangian L;
  L.m = 1;
  L.N = 1;
  L.name = "layered-1d";
  L.growth = {1.0, 2.0, 2.0};
  auto coeff = [](const double* x) { return frac(x[0]) < 0.5 ? 1.0 : 2.0; };
  L.eval = [coeff](const double* x, const double*, const Matrix& A) {
    return coeff(x) * A(0, 0) * A(0, 0);
  };
  L.derivative_A = [coeff](const double* x, const double*, const Matrix& A, Matrix& dA) {
    dA(0, 0) = 2.0 * coeff(x) * A(0, 0);
  };
  L.derivative_s = [](const double*, const double*, const Matrix&, double* ds) { ds[0] = 0.0; };
  return L;
}

Lagrangian make_nonuap_indicator() {
  // 1 on integer target values, 2 elsewhere. Not coercive in A; used by the
  // covering-failure demonstration, not by the solver.
  Lagrangian L;
  L.m = 2;
  L.N = 2;
  L.name = "nonuap-indicator";
  L.growth = {0.0, 2.0, 2.0};
  L.coercive = false;
  L.eval = [](const double*, const double* s, const Matrix&) {
    const bool integer = std::fabs(s[0] - std::round(s[0])) <= 1e-9 &&
                         std::fabs(s[1] - std::round(s[1])) <= 1e-9;
    return integer ? 1.0 : 2.0;
  };
  L.smooth_away_from = "everywhere (piecewise constant in s)";
  L.smooth_at = [](const double*, const double*, const Matrix&) { return false; };
  return L;
}

} // namespace

Lagrangian make_model(const std::string& id) {
  if (id == "quadratic-iso") return make_quadratic_iso();
  if (id == "finsler-asym") return make_counterexample_finsler();
  if (id == "dominance-3norm") {
    Lagrangian L = dominance_to_lagrangian(make_dominance_g(quintic_smoothstep_cutoff()));
    L.name = "dominance-3norm";
    return L;
  }
  if (id == "cartan-noneven") return make_cartan_noneven_model();
  if (id == "riemannian-iso") return make_riemannian_iso();
  if (id == "checkerboard") return make_checkerboard();
  if (id == "layered-1d") return make_layered_1d();
  if (id == "nonuap-indicator") return make_nonuap_indicator();
  std::string known;
  for (const std::string& m : model_ids()) {
    if (!known.empty()) known += ", ";
    known += m;
  }
  throw std::invalid_argument("unknown model id: " + id + " (known: " + known + ")");
}

std::vector<std::string> model_ids() {
  return {"quadratic-iso", "finsler-asym",  "dominance-3norm", "cartan-noneven",
          "riemannian-iso", "checkerboard", "layered-1d",      "nonuap-indicator"};
}

} // namespace homog
