#include "homog/cell_solver.hpp"

#include <algorithm>
#include <cmath>

#include "homog/kernels.hpp"
#include "homog/rng.hpp"

namespace homog {

namespace {

// Scratch shared by the energy/gradient cell loops.
struct CellScratch {
  int cell_idx[8];
  std::int64_t corners[256];
  std::vector<double> x, sbar, s_tot, ds;
  Matrix G, A_tot, dA;

  CellScratch(int m, int N)
      : x(m), sbar(N), s_tot(N), ds(N), G(N, m), A_tot(N, m), dA(N, m) {}
};

void cell_state(const CellProblem& p, const GridField& u, std::int64_t cell, CellScratch& sc) {
  const Grid& g = p.grid;
  g.cell_multi(cell, sc.cell_idx);
  g.cell_corners(sc.cell_idx, sc.corners);
  g.cell_center(sc.cell_idx, sc.x.data());
  cell_average(u, sc.corners, sc.sbar.data());
  cell_gradient(u, sc.corners, sc.G);
  matvec(p.Y, sc.x.data(), sc.s_tot.data());
  const int N = p.Y.rows(), m = p.Y.cols();
  for (int i = 0; i < N; ++i) sc.s_tot[static_cast<std::size_t>(i)] += sc.sbar[static_cast<std::size_t>(i)];
  for (int i = 0; i < N; ++i)
    for (int a = 0; a < m; ++a) sc.A_tot(i, a) = sc.G(i, a) + p.Y(i, a);
}

// Central differences of eval in the A slot.
void fd_derivative_A(const Lagrangian& L, const double* x, const double* s, Matrix A, Matrix& dA) {
  for (int i = 0; i < A.rows(); ++i) {
    for (int a = 0; a < A.cols(); ++a) {
      const double v = A(i, a);
      const double h = 1e-6 * std::max(1.0, std::fabs(v));
      A(i, a) = v + h;
      const double fp = L.eval(x, s, A);
      A(i, a) = v - h;
      const double fm = L.eval(x, s, A);
      A(i, a) = v;
      dA(i, a) = (fp - fm) / (2.0 * h);
    }
  }
}

// Central differences of eval in the s slot.
void fd_derivative_s(const Lagrangian& L, const double* x, const double* s_in, const Matrix& A,
                     double* ds, int N) {
  std::vector<double> s(s_in, s_in + N);
  for (int k = 0; k < N; ++k) {
    const double v = s[static_cast<std::size_t>(k)];
    const double h = 1e-6 * std::max(1.0, std::fabs(v));
    s[static_cast<std::size_t>(k)] = v + h;
    const double fp = L.eval(x, s.data(), A);
    s[static_cast<std::size_t>(k)] = v - h;
    const double fm = L.eval(x, s.data(), A);
    s[static_cast<std::size_t>(k)] = v;
    ds[k] = (fp - fm) / (2.0 * h);
  }
}

struct RunResult {
  double energy = 0.0;
  GridField u;
  long iterations = 0;
  bool converged = false;
  bool line_search_failed = false;
};

RunResult descend(const CellProblem& p, const SolveConfig& cfg, GridField u) {
  const std::size_t n = u.values.size();
  RunResult r;
  double energy = cell_energy(p, u);

  std::vector<double> grad;
  GridField trial = u;
  double warm_step = cfg.initial_step;
  int stalled = 0;
  for (long it = 0; it < cfg.max_iterations; ++it) {
    cell_energy_gradient(p, u, grad);
    if (kernels::max_abs(grad.data(), n) <= cfg.gradient_tolerance) {
      r.converged = true;
      break;
    }
    const double gg = kernels::dot(grad.data(), grad.data(), n);
    double step = std::min(cfg.initial_step, warm_step * 2.0);
    bool accepted = false;
    bool decreased = false;
    for (int bt = 0; bt <= cfg.max_backtracks; ++bt) {
      kernels::axpy(trial.values.data(), u.values.data(), grad.data(), -step, n);
      const double trial_energy = cell_energy(p, trial);
      if (trial_energy <= energy - cfg.armijo_c * step * gg) {
        decreased = trial_energy < energy;
        u.values.swap(trial.values);
        energy = trial_energy;
        warm_step = step;
        accepted = true;
        break;
      }
      step *= cfg.backtrack;
    }
    ++r.iterations;
    if (!accepted) {
      r.line_search_failed = true;
      break;
    }
    // A run of accepted steps without a representable energy decrease means
    // the iteration has reached the rounding floor. Near the floor single
    // zero-decrease steps are common while ulp-sized decreases still occur,
    // so only a longer run is treated as terminal; the convergence test at
    // the top keeps running in between.
    stalled = decreased ? 0 : stalled + 1;
    if (stalled >= 8) {
      r.line_search_failed = true;
      break;
    }
  }
  r.energy = energy;
  r.u = std::move(u);
  return r;
}

} // namespace

void validate_problem(const CellProblem& p) {
  const Lagrangian& L = p.lagrangian;
  if (!L.eval) throw std::invalid_argument("cell problem: lagrangian has no eval");
  if (!L.coercive)
    throw std::invalid_argument("cell problem: lagrangian '" + L.name + "' is not coercive");
  if (L.growth.c1 <= 0.0 || L.growth.c2 < L.growth.c1 || L.growth.p < 1.0)
    throw std::invalid_argument("cell problem: invalid growth bounds");
  if (p.grid.dim != L.m)
    throw std::invalid_argument("cell problem: grid dimension != lagrangian m");
  if (p.Y.rows() != L.N || p.Y.cols() != L.m)
    throw std::invalid_argument("cell problem: Y must be N x m");
  if (!p.Y.all_finite()) throw std::invalid_argument("cell problem: Y has non-finite entries");
  if (p.grid.dim < 1 || p.grid.dim > 8)
    throw std::invalid_argument("cell problem: grid dimension out of range");
  if (p.grid.nodes_per_side < 1) throw std::invalid_argument("cell problem: empty grid");
  if (!(p.grid.side_length > 0.0)) throw std::invalid_argument("cell problem: side length <= 0");
}

double cell_energy(const CellProblem& p, const GridField& u) {
  const Lagrangian& L = p.lagrangian;
  CellScratch sc(L.m, L.N);
  const std::int64_t n_cells = p.grid.cell_count();
  const double w = p.grid.cell_volume() / std::pow(p.grid.side_length, p.grid.dim);
  double acc = 0.0;
  for (std::int64_t cell = 0; cell < n_cells; ++cell) {
    cell_state(p, u, cell, sc);
    const double f = L.eval(sc.x.data(), sc.s_tot.data(), sc.A_tot);
    if (!std::isfinite(f)) throw NumericalError("non-finite integrand value", cell);
    acc += f;
  }
  return acc * w;
}

void cell_energy_gradient(const CellProblem& p, const GridField& u, std::vector<double>& grad) {
  const Lagrangian& L = p.lagrangian;
  const int m = L.m, N = L.N;
  const int n_corners = 1 << m;
  CellScratch sc(m, N);
  grad.assign(u.values.size(), 0.0);

  const double w = p.grid.cell_volume() / std::pow(p.grid.side_length, m);
  const double avg_w = w / n_corners;
  const double grad_scale = w / ((n_corners / 2) * p.grid.spacing());

  const std::int64_t n_cells = p.grid.cell_count();
  for (std::int64_t cell = 0; cell < n_cells; ++cell) {
    cell_state(p, u, cell, sc);
    if (L.derivative_A)
      L.derivative_A(sc.x.data(), sc.s_tot.data(), sc.A_tot, sc.dA);
    else
      fd_derivative_A(L, sc.x.data(), sc.s_tot.data(), sc.A_tot, sc.dA);
    if (L.derivative_s)
      L.derivative_s(sc.x.data(), sc.s_tot.data(), sc.A_tot, sc.ds.data());
    else
      fd_derivative_s(L, sc.x.data(), sc.s_tot.data(), sc.A_tot, sc.ds.data(), N);
    if (!sc.dA.all_finite()) throw NumericalError("non-finite gradient value", cell);

    for (int k = 0; k < n_corners; ++k) {
      double* g = grad.data() + static_cast<std::size_t>(sc.corners[k]) * N;
      for (int i = 0; i < N; ++i) {
        double acc = sc.ds[static_cast<std::size_t>(i)] * avg_w;
        for (int a = 0; a < m; ++a) {
          const int bit = m - 1 - a;
          const double sign = ((k >> bit) & 1) ? 1.0 : -1.0;
          acc += sign * grad_scale * sc.dA(i, a);
        }
        g[i] += acc;
      }
    }
  }

  // The boundary is fixed: no descent there.
  const std::int64_t n_nodes = p.grid.node_count();
  for (std::int64_t node = 0; node < n_nodes; ++node)
    if (p.grid.is_boundary_node(node))
      for (int c = 0; c < N; ++c) grad[static_cast<std::size_t>(node) * N + c] = 0.0;
}

CellSolution minimize(const CellProblem& p, const SolveConfig& cfg) {
  validate_problem(p);
  if (cfg.max_iterations < 0 || cfg.restarts < 0)
    throw std::invalid_argument("minimize: negative iteration budget");

  const int N = p.lagrangian.N;
  CellSolution sol;
  bool have_best = false;
  for (int run = 0; run <= cfg.restarts; ++run) {
    GridField start(p.grid, N);
    if (run > 0) {
      Rng rng(cfg.seed + static_cast<std::uint64_t>(run));
      const std::int64_t n_nodes = p.grid.node_count();
      for (std::int64_t node = 0; node < n_nodes; ++node) {
        if (p.grid.is_boundary_node(node)) continue;
        for (int c = 0; c < N; ++c)
          start.at(node, c) = rng.uniform(-cfg.init_scale, cfg.init_scale);
      }
    }
    RunResult r = descend(p, cfg, std::move(start));
    sol.restart_energies.push_back(r.energy);
    sol.iterations_used += r.iterations;
    if (!have_best || r.energy < sol.energy) {
      have_best = true;
      sol.energy = r.energy;
      sol.minimizer = std::move(r.u);
      sol.converged = r.converged;
      sol.line_search_failed = r.line_search_failed;
    }
  }
  return sol;
}

GradientCheckResult gradient_check(const CellProblem& p, const GridField& u, double fd_eps,
                                   int max_coords, std::uint64_t seed) {
  validate_problem(p);
  const int N = p.lagrangian.N;
  std::vector<double> grad;
  cell_energy_gradient(p, u, grad);

  std::vector<std::size_t> interior;
  const std::int64_t n_nodes = p.grid.node_count();
  for (std::int64_t node = 0; node < n_nodes; ++node) {
    if (p.grid.is_boundary_node(node)) continue;
    for (int c = 0; c < N; ++c) interior.push_back(static_cast<std::size_t>(node) * N + c);
  }

  Rng rng(seed);
  const int n_check = std::min<std::size_t>(interior.size(), static_cast<std::size_t>(max_coords));
  // Partial Fisher-Yates: the first n_check entries become the sample.
  for (int i = 0; i < n_check; ++i) {
    const std::size_t j =
        static_cast<std::size_t>(rng.uniform_int(i, static_cast<std::int64_t>(interior.size()) - 1));
    std::swap(interior[static_cast<std::size_t>(i)], interior[j]);
  }

  GridField v = u;
  GradientCheckResult res;
  for (int i = 0; i < n_check; ++i) {
    const std::size_t j = interior[static_cast<std::size_t>(i)];
    const double saved = v.values[j];
    v.values[j] = saved + fd_eps;
    const double ep = cell_energy(p, v);
    v.values[j] = saved - fd_eps;
    const double em = cell_energy(p, v);
    v.values[j] = saved;
    const double g_fd = (ep - em) / (2.0 * fd_eps);
    const double g_an = grad[j];
    const double rel = std::fabs(g_fd - g_an) / std::max({1.0, std::fabs(g_fd), std::fabs(g_an)});
    res.max_rel_err = std::max(res.max_rel_err, rel);
    ++res.checked;
  }
  return res;
}

DerivativeCheckResult integrand_derivative_check(const Lagrangian& L, int samples,
                                                 std::uint64_t seed, double fd_eps) {
  DerivativeCheckResult res;
  if (!L.derivative_A && !L.derivative_s) return res;

  Rng rng(seed);
  std::vector<double> x(static_cast<std::size_t>(L.m)), s(static_cast<std::size_t>(L.N));
  std::vector<double> ds(static_cast<std::size_t>(L.N)), ds_fd(static_cast<std::size_t>(L.N));
  Matrix A(L.N, L.m), dA(L.N, L.m), dA_fd(L.N, L.m);
  for (int k = 0; k < samples; ++k) {
    for (auto& xi : x) xi = rng.uniform();
    for (auto& si : s) si = rng.uniform(-1.0, 1.0);
    for (int i = 0; i < L.N; ++i)
      for (int a = 0; a < L.m; ++a) A(i, a) = rng.uniform(-2.0, 2.0);
    if (L.smooth_at && !L.smooth_at(x.data(), s.data(), A)) {
      ++res.skipped_nonsmooth;
      continue;
    }
    auto update = [&res](double an, double fd) {
      const double rel = std::fabs(an - fd) / std::max({1.0, std::fabs(an), std::fabs(fd)});
      res.max_rel_err = std::max(res.max_rel_err, rel);
    };
    if (L.derivative_A) {
      L.derivative_A(x.data(), s.data(), A, dA);
      Matrix Ap = A;
      for (int i = 0; i < L.N; ++i) {
        for (int a = 0; a < L.m; ++a) {
          const double v = A(i, a);
          const double h = fd_eps * std::max(1.0, std::fabs(v));
          Ap(i, a) = v + h;
          const double fp = L.eval(x.data(), s.data(), Ap);
          Ap(i, a) = v - h;
          const double fm = L.eval(x.data(), s.data(), Ap);
          Ap(i, a) = v;
          update(dA(i, a), (fp - fm) / (2.0 * h));
        }
      }
    }
    if (L.derivative_s) {
      L.derivative_s(x.data(), s.data(), A, ds.data());
      for (int i = 0; i < L.N; ++i) {
        const double v = s[static_cast<std::size_t>(i)];
        const double h = fd_eps * std::max(1.0, std::fabs(v));
        s[static_cast<std::size_t>(i)] = v + h;
        const double fp = L.eval(x.data(), s.data(), A);
        s[static_cast<std::size_t>(i)] = v - h;
        const double fm = L.eval(x.data(), s.data(), A);
        s[static_cast<std::size_t>(i)] = v;
        update(ds[static_cast<std::size_t>(i)], (fp - fm) / (2.0 * h));
      }
    }
    ++res.checked;
  }
  return res;
}

} // namespace homog
