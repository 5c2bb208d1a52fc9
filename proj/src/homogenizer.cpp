#include "homog/homogenizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "homog/rng.hpp"

namespace homog {

namespace {

CellEstimate solve_at(const Lagrangian& L, const Matrix& Y, double t, const HomSchedule& sched) {
  Grid grid;
  grid.dim = L.m;
  grid.side_length = t;
  grid.nodes_per_side = std::max<int>(1, static_cast<int>(std::llround(t * sched.nodes_per_unit)));
  CellProblem p{L, Y, grid};
  CellSolution sol = minimize(p, sched.solve);
  CellEstimate e;
  e.t = t;
  e.energy = sol.energy;
  e.converged = sol.converged;
  e.iterations = sol.iterations_used;
  return e;
}

void fit_intercept(HomResult& r) {
  const std::size_t n = r.estimates.size();
  if (n == 1) {
    r.f_hom = r.estimates[0].energy;
    r.slope = 0.0;
    r.fit_residual = 0.0;
    return;
  }
  double s1 = 0.0, s2 = 0.0, se = 0.0, ste = 0.0;
  for (const auto& e : r.estimates) {
    const double w = 1.0 / e.t;
    s1 += w;
    s2 += w * w;
    se += e.energy;
    ste += e.energy * w;
  }
  const double fn = static_cast<double>(n);
  const double det = fn * s2 - s1 * s1;
  r.f_hom = (s2 * se - s1 * ste) / det;
  r.slope = (fn * ste - s1 * se) / det;
  double rss = 0.0;
  for (const auto& e : r.estimates) {
    const double d = e.energy - (r.f_hom + r.slope / e.t);
    rss += d * d;
  }
  r.fit_residual = std::sqrt(rss / fn);
}

} // namespace

HomResult estimate_f_hom(const Lagrangian& L, const Matrix& Y, const HomSchedule& sched) {
  if (sched.t_values.empty()) throw std::invalid_argument("estimate_f_hom: empty t schedule");
  for (std::size_t i = 1; i < sched.t_values.size(); ++i)
    if (!(sched.t_values[i] > sched.t_values[i - 1]))
      throw std::invalid_argument("estimate_f_hom: t values must be strictly increasing");
  if (sched.nodes_per_unit < 1) throw std::invalid_argument("estimate_f_hom: nodes_per_unit < 1");
  if (!L.periodic_x)
    throw std::invalid_argument("estimate_f_hom: lagrangian must be unit-periodic in x");

  HomResult r;
  r.Y = Y;
  r.all_converged = true;
  for (double t : sched.t_values) {
    r.estimates.push_back(solve_at(L, Y, t, sched));
    r.all_converged = r.all_converged && r.estimates.back().converged;
  }
  fit_intercept(r);

  const double yp = std::pow(std::sqrt(Y.frobenius_sq()), L.growth.p);
  const double fit_tol = r.fit_residual + 1e-8;
  r.growth_ok = (L.growth.c1 * yp <= r.f_hom + fit_tol) &&
                (r.f_hom <= L.growth.c2 * (1.0 + yp) + fit_tol);
  return r;
}

double quasiconvexity_probe(const std::function<double(const Matrix&)>& density, const Matrix& Y,
                            int samples, std::uint64_t seed) {
  const int N = Y.rows(), m = Y.cols();
  Grid grid;
  grid.dim = m;
  grid.side_length = 1.0;
  grid.nodes_per_side = 4;

  Rng rng(seed);
  const double base = density(Y);
  double worst = 0.0;
  GridField phi(grid, N);
  Matrix A(N, m);
  const std::int64_t n_nodes = grid.node_count();
  for (int k = 0; k < samples; ++k) {
    std::fill(phi.values.begin(), phi.values.end(), 0.0);
    if (k % 2 == 0) {
      // Single-node hat with a random component and amplitude.
      std::int64_t node = 0;
      do {
        node = rng.uniform_int(0, n_nodes - 1);
      } while (grid.is_boundary_node(node));
      phi.at(node, static_cast<int>(rng.uniform_int(0, N - 1))) = rng.uniform(-1.0, 1.0);
    } else {
      for (std::int64_t node = 0; node < n_nodes; ++node) {
        if (grid.is_boundary_node(node)) continue;
        for (int c = 0; c < N; ++c) phi.at(node, c) = rng.uniform(-0.5, 0.5);
      }
    }
    const std::vector<Matrix> grads = gradient_at_cells(phi);
    double acc = 0.0;
    for (const Matrix& G : grads) {
      for (int i = 0; i < N; ++i)
        for (int a = 0; a < m; ++a) A(i, a) = Y(i, a) + G(i, a);
      acc += density(A);
    }
    const double gap = acc / static_cast<double>(grads.size()) - base;
    worst = std::min(worst, gap);
  }
  return worst;
}

double rank_one_probe(const std::function<double(const Matrix&)>& density, const Matrix& Y,
                      int directions, std::uint64_t seed) {
  const int N = Y.rows(), m = Y.cols();
  const double delta = 0.25;
  Rng rng(seed);
  Matrix A(N, m);
  std::vector<double> a(static_cast<std::size_t>(N)), b(static_cast<std::size_t>(m));
  double worst = 0.0;
  for (int k = 0; k < directions; ++k) {
    for (auto& v : a) v = rng.normal();
    for (auto& v : b) v = rng.normal();
    auto at = [&](double tau) {
      for (int i = 0; i < N; ++i)
        for (int al = 0; al < m; ++al)
          A(i, al) = Y(i, al) + tau * a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(al)];
      return density(A);
    };
    for (int j = -4; j <= 4; ++j) {
      const double tau = 0.25 * j;
      const double d2 = (at(tau + delta) - 2.0 * at(tau) + at(tau - delta)) / (delta * delta);
      worst = std::min(worst, d2);
    }
  }
  return worst;
}

SymmetryReport permutation_symmetry_check(const Lagrangian& L, const Matrix& Y, int col_i,
                                          int col_j, const HomSchedule& sched) {
  if (col_i < 0 || col_j < 0 || col_i >= Y.cols() || col_j >= Y.cols())
    throw std::invalid_argument("permutation_symmetry_check: column index out of range");
  Matrix Yp = Y;
  for (int i = 0; i < Y.rows(); ++i) {
    Yp(i, col_i) = Y(i, col_j);
    Yp(i, col_j) = Y(i, col_i);
  }
  SymmetryReport rep;
  rep.base = estimate_f_hom(L, Y, sched);
  rep.permuted = estimate_f_hom(L, Yp, sched);
  rep.difference = std::fabs(rep.base.f_hom - rep.permuted.f_hom);
  rep.tolerance = rep.base.fit_residual + rep.permuted.fit_residual +
                  0.02 * std::max(std::fabs(rep.base.f_hom), std::fabs(rep.permuted.f_hom));
  rep.pass = rep.difference <= rep.tolerance;
  return rep;
}

SweepReport epsilon_sweep_compare(const Lagrangian& L, const Matrix& Y,
                                  const std::vector<double>& epsilons, const HomSchedule& sched) {
  if (epsilons.empty()) throw std::invalid_argument("epsilon_sweep_compare: empty epsilon list");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0)) throw std::invalid_argument("epsilon_sweep_compare: epsilon <= 0");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
      throw std::invalid_argument("epsilon_sweep_compare: epsilons must be strictly decreasing");
  }
  SweepReport rep;
  rep.reference = estimate_f_hom(L, Y, sched).f_hom;
  rep.all_converged = true;
  for (double eps : epsilons) {
    CellEstimate e = solve_at(L, Y, 1.0 / eps, sched);
    rep.points.push_back({eps, e.energy, e.converged, e.iterations});
    rep.all_converged = rep.all_converged && e.converged;
  }
  rep.final_rel_gap = std::fabs(rep.points.back().energy - rep.reference) /
                      std::max(std::fabs(rep.reference), 1e-12);
  rep.pass = rep.final_rel_gap <= 0.03;
  return rep;
}

} // namespace homog
