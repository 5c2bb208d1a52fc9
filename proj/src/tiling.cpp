#include "homog/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace homog {

namespace {

std::int64_t pow_int(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

std::string vec_str(const std::vector<std::int64_t>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  out += ')';
  return out;
}

std::string num_str(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::int64_t sup_dist(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  std::int64_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max<std::int64_t>(d, std::llabs(a[i] - b[i]));
  return d;
}

} // namespace

std::int64_t Tiling::remainder_measure() const {
  return pow_int(params.s, params.m) - pow_int(params.t + 2, params.m) * index_count();
}

Tiling build_tiling(const TilingParams& params) {
  if (params.t < 1) throw std::invalid_argument("build_tiling: t must be a positive integer");
  if (params.s <= params.t + 4) throw std::invalid_argument("build_tiling: requires s > t + 4");
  if (params.m < 1 || params.m > 8) throw std::invalid_argument("build_tiling: m out of range");
  if (params.Y.cols() != params.m || params.Y.rows() < 1)
    throw std::invalid_argument("build_tiling: Y must have m columns");
  if (!params.Y.all_finite()) throw std::invalid_argument("build_tiling: Y has non-finite entries");

  Tiling T;
  T.params = params;
  T.per_axis = params.s / (params.t + 4);

  const int m = params.m;
  const int N = params.Y.rows();
  const std::int64_t count = pow_int(T.per_axis, m);
  T.blocks.reserve(static_cast<std::size_t>(count));
  std::vector<double> sigma_real(static_cast<std::size_t>(m)), ys(static_cast<std::size_t>(N));
  for (std::int64_t linear = 0; linear < count; ++linear) {
    TilingBlock b;
    b.z.resize(static_cast<std::size_t>(m));
    std::int64_t rem = linear;
    for (int d = m - 1; d >= 0; --d) {
      b.z[static_cast<std::size_t>(d)] = rem % T.per_axis;
      rem /= T.per_axis;
    }
    b.sigma.resize(static_cast<std::size_t>(m));
    b.tau.resize(static_cast<std::size_t>(m));
    for (int d = 0; d < m; ++d) {
      b.sigma[static_cast<std::size_t>(d)] = (params.t + 4) * b.z[static_cast<std::size_t>(d)] + 2;
      b.tau[static_cast<std::size_t>(d)] = b.sigma[static_cast<std::size_t>(d)] - 1;
    }
    for (int d = 0; d < m; ++d)
      sigma_real[static_cast<std::size_t>(d)] = static_cast<double>(b.sigma[static_cast<std::size_t>(d)]);
    matvec(params.Y, sigma_real.data(), ys.data());
    b.lambda.resize(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i)
      b.lambda[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::ceil(ys[static_cast<std::size_t>(i)]));
    T.blocks.push_back(std::move(b));
  }
  return T;
}

VerificationReport verify_tiling(const Tiling& T) {
  VerificationReport rep;
  rep.name = "tiling";
  const TilingParams& P = T.params;
  const int m = P.m;
  const int N = P.Y.rows();
  const std::int64_t t = P.t, s = P.s;

  const std::int64_t expect_count = pow_int(s / (t + 4), m);
  rep.add("index-count", T.index_count() == expect_count, 0.0,
          std::to_string(T.index_count()) + " == " + std::to_string(expect_count));

  bool cell_ok = true;
  for (const auto& b : T.blocks)
    for (int d = 0; d < m; ++d)
      cell_ok = cell_ok && (b.sigma[static_cast<std::size_t>(d)] - (t + 4) * b.z[static_cast<std::size_t>(d)] == 2) &&
                (b.tau[static_cast<std::size_t>(d)] == b.sigma[static_cast<std::size_t>(d)] - 1);
  rep.add("sigma-anchor", cell_ok, 0.0, "sigma = (t+4)z + 2, tau = sigma - 1");

  // lambda - Y sigma in [0,1)^N, componentwise.
  double lam_margin = 1.0;
  bool lam_ok = true;
  {
    std::vector<double> sig(static_cast<std::size_t>(m)), ys(static_cast<std::size_t>(N));
    for (const auto& b : T.blocks) {
      for (int d = 0; d < m; ++d) sig[static_cast<std::size_t>(d)] = static_cast<double>(b.sigma[static_cast<std::size_t>(d)]);
      matvec(P.Y, sig.data(), ys.data());
      for (int i = 0; i < N; ++i) {
        const double off = static_cast<double>(b.lambda[static_cast<std::size_t>(i)]) - ys[static_cast<std::size_t>(i)];
        lam_ok = lam_ok && off >= 0.0 && off < 1.0;
        lam_margin = std::min(lam_margin, std::min(off, 1.0 - off));
      }
    }
  }
  rep.add("lambda-window", lam_ok, lam_margin, "lambda - Y sigma in [0,1)^N");

  // Outer boxes tau + [0,t+2)^m inside (0,s)^m.
  std::int64_t contain_slack = s;
  for (const auto& b : T.blocks)
    for (int d = 0; d < m; ++d) {
      contain_slack = std::min(contain_slack, b.tau[static_cast<std::size_t>(d)] - 1);
      contain_slack = std::min(contain_slack, s - (b.tau[static_cast<std::size_t>(d)] + t + 2));
    }
  rep.add("containment", contain_slack >= 0, static_cast<double>(contain_slack),
          "outer boxes inside (0,s)^m, integer slack");

  // Pairwise sup-norm separations.
  const std::size_t nb = T.blocks.size();
  std::int64_t ss_min = s, tt_min = s, st_min = s;
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      if (i == j) continue;
      ss_min = std::min(ss_min, sup_dist(T.blocks[i].sigma, T.blocks[j].sigma));
      tt_min = std::min(tt_min, sup_dist(T.blocks[i].tau, T.blocks[j].tau));
      st_min = std::min(st_min, sup_dist(T.blocks[i].sigma, T.blocks[j].tau));
    }
  if (nb < 2) {
    rep.add("sigma-sigma-separation", true, 0.0, "single block, no pairs");
    rep.add("tau-tau-separation", true, 0.0, "single block, no pairs");
    rep.add("sigma-tau-separation", true, 0.0, "single block, no pairs");
  } else {
    rep.add("sigma-sigma-separation", ss_min >= t + 3, static_cast<double>(ss_min - (t + 3)),
            "min sup distance " + std::to_string(ss_min) + " >= t+3");
    rep.add("tau-tau-separation", tt_min >= t + 3, static_cast<double>(tt_min - (t + 3)),
            "min sup distance " + std::to_string(tt_min) + " >= t+3");
    rep.add("sigma-tau-separation", st_min >= t + 2, static_cast<double>(st_min - (t + 2)),
            "min sup distance " + std::to_string(st_min) + " >= t+2");
  }

  // Exhaustive unit-pixel enumeration over [0,s)^m.
  const std::int64_t n_pixels = pow_int(s, m);
  std::vector<std::int64_t> pix(static_cast<std::size_t>(m));
  std::int64_t max_cover = 0, uncovered = 0;
  std::vector<std::int64_t> outer_pixels(nb, 0), inner_pixels(nb, 0);
  for (std::int64_t linear = 0; linear < n_pixels; ++linear) {
    std::int64_t rem = linear;
    for (int d = m - 1; d >= 0; --d) {
      pix[static_cast<std::size_t>(d)] = rem % s;
      rem /= s;
    }
    std::int64_t cover = 0;
    for (std::size_t bi = 0; bi < nb; ++bi) {
      const auto& b = T.blocks[bi];
      bool in_outer = true, in_inner = true;
      for (int d = 0; d < m; ++d) {
        const std::int64_t q = pix[static_cast<std::size_t>(d)];
        const std::int64_t tau_d = b.tau[static_cast<std::size_t>(d)];
        const std::int64_t sig_d = b.sigma[static_cast<std::size_t>(d)];
        in_outer = in_outer && q >= tau_d && q < tau_d + t + 2;
        in_inner = in_inner && q >= sig_d && q < sig_d + t;
      }
      if (in_outer) {
        ++cover;
        ++outer_pixels[bi];
      }
      if (in_inner) ++inner_pixels[bi];
    }
    max_cover = std::max(max_cover, cover);
    if (cover == 0) ++uncovered;
  }
  rep.add("pixel-disjoint", max_cover <= 1, static_cast<double>(1 - max_cover),
          "max outer-box coverage " + std::to_string(max_cover));
  bool counts_ok = true;
  for (std::size_t bi = 0; bi < nb; ++bi)
    counts_ok = counts_ok && outer_pixels[bi] == pow_int(t + 2, m) && inner_pixels[bi] == pow_int(t, m);
  rep.add("box-pixel-counts", counts_ok, 0.0,
          "each block: (t+2)^m outer and t^m inner pixels");
  const std::int64_t expect_q = pow_int(s, m) - pow_int(t + 2, m) * T.index_count();
  rep.add("remainder-measure", uncovered == expect_q && T.remainder_measure() == expect_q, 0.0,
          "enumerated " + std::to_string(uncovered) + " == formula " + std::to_string(expect_q));
  return rep;
}

void dump_tiling(const Tiling& T, std::ostream& os) {
  os << "tiling 1\n";
  os << "t " << T.params.t << "\n";
  os << "s " << T.params.s << "\n";
  os << "m " << T.params.m << "\n";
  os << "Y " << format_matrix(T.params.Y) << "\n";
  os << "index_count " << T.index_count() << "\n";
  os << "remainder_measure " << T.remainder_measure() << "\n";
  for (const auto& b : T.blocks)
    os << "block z=" << vec_str(b.z) << " sigma=" << vec_str(b.sigma) << " tau=" << vec_str(b.tau)
       << " lambda=" << vec_str(b.lambda) << "\n";
}

GridField patch_field(const GridField& u_t, const Tiling& T, const Grid& grid_s) {
  const TilingParams& P = T.params;
  const int m = P.m;
  const int N = P.Y.rows();
  const std::int64_t t = P.t, s = P.s;

  if (u_t.grid.dim != m || grid_s.dim != m)
    throw std::invalid_argument("patch_field: grid dimension mismatch");
  if (u_t.components != N)
    throw std::invalid_argument("patch_field: component count != rows of Y");
  if (grid_s.side_length != static_cast<double>(s) ||
      u_t.grid.side_length != static_cast<double>(t))
    throw std::invalid_argument("patch_field: grid side lengths must equal s and t");
  if (grid_s.nodes_per_side % s != 0)
    throw std::invalid_argument("patch_field: s-grid cells per unit length not integral");
  const std::int64_t k = grid_s.nodes_per_side / s;
  if (u_t.grid.nodes_per_side != t * k)
    throw std::invalid_argument("patch_field: t-grid spacing differs from s-grid spacing");
  if (u_t.max_boundary_abs() != 0.0)
    throw std::invalid_argument("patch_field: u_t must vanish on its boundary");

  // Per block: the constant lambda - Y sigma appearing on B_z and ramped
  // across the collar.
  const std::size_t nb = T.blocks.size();
  std::vector<std::vector<double>> offset(nb, std::vector<double>(static_cast<std::size_t>(N)));
  {
    std::vector<double> sig(static_cast<std::size_t>(m)), ys(static_cast<std::size_t>(N));
    for (std::size_t bi = 0; bi < nb; ++bi) {
      const auto& b = T.blocks[bi];
      for (int d = 0; d < m; ++d) sig[static_cast<std::size_t>(d)] = static_cast<double>(b.sigma[static_cast<std::size_t>(d)]);
      matvec(P.Y, sig.data(), ys.data());
      for (int i = 0; i < N; ++i)
        offset[bi][static_cast<std::size_t>(i)] =
            static_cast<double>(b.lambda[static_cast<std::size_t>(i)]) - ys[static_cast<std::size_t>(i)];
    }
  }

  GridField u_s(grid_s, N);
  const std::int64_t n_nodes = grid_s.node_count();
  int idx[8], idx_t[8];
  std::int64_t y[8];
  const std::int64_t outer_span = (t + 2) * k;
  for (std::int64_t node = 0; node < n_nodes; ++node) {
    grid_s.node_multi(node, idx);
    // Locate the block whose outer box (closed, in node units) contains
    // this node; the boxes are separated so the candidate is unique.
    bool inside = true;
    std::int64_t block_linear = 0;
    for (int d = 0; d < m && inside; ++d) {
      const std::int64_t pos = idx[d];
      const std::int64_t cand = pos >= k ? (pos - k) / ((t + 4) * k) : -1;
      if (cand < 0 || cand >= T.per_axis) {
        inside = false;
        break;
      }
      const std::int64_t lo = ((t + 4) * cand + 1) * k;
      if (pos < lo || pos > lo + outer_span) {
        inside = false;
        break;
      }
      y[d] = pos - lo;
      block_linear = block_linear * T.per_axis + cand;
    }
    if (!inside) continue; // remainder region Q: zero

    double wgt = 1.0;
    bool in_B = true;
    for (int d = 0; d < m; ++d) {
      const std::int64_t wd = std::min(y[d], outer_span - y[d]);
      if (wd < k) {
        wgt *= static_cast<double>(wd) / static_cast<double>(k);
        in_B = false;
      }
      in_B = in_B && y[d] >= k && y[d] <= (t + 1) * k;
    }
    std::int64_t node_t = -1;
    if (in_B) {
      for (int d = 0; d < m; ++d) idx_t[d] = static_cast<int>(y[d] - k);
      node_t = u_t.grid.node_linear(idx_t);
    }
    const std::vector<double>& off = offset[static_cast<std::size_t>(block_linear)];
    for (int c = 0; c < N; ++c)
      u_s.at(node, c) = (in_B ? u_t.at(node_t, c) : 0.0) + wgt * off[static_cast<std::size_t>(c)];
  }
  return u_s;
}

SubadditivityResult verify_subadditivity(const Lagrangian& L, const Matrix& Y, std::int64_t t,
                                         std::int64_t s, const SolveConfig& cfg,
                                         int nodes_per_unit) {
  if (nodes_per_unit < 1) throw std::invalid_argument("verify_subadditivity: nodes_per_unit < 1");
  const int m = L.m, N = L.N;

  TilingParams params;
  params.t = t;
  params.s = s;
  params.m = m;
  params.Y = Y;
  Tiling T = build_tiling(params);

  Grid grid_t;
  grid_t.dim = m;
  grid_t.side_length = static_cast<double>(t);
  grid_t.nodes_per_side = static_cast<int>(t) * nodes_per_unit;
  CellProblem prob_t{L, Y, grid_t};
  CellSolution sol_t = minimize(prob_t, cfg);

  Grid grid_s;
  grid_s.dim = m;
  grid_s.side_length = static_cast<double>(s);
  grid_s.nodes_per_side = static_cast<int>(s) * nodes_per_unit;
  GridField u_s = patch_field(sol_t.minimizer, T, grid_s);

  CellProblem prob_s{L, Y, grid_s};
  const double patched = cell_energy(prob_s, u_s);
  CellSolution sol_s = minimize(prob_s, cfg);

  // Classify each s-grid cell (cells never straddle box boundaries) and
  // split the patched energy into remainder, collar and block shares.
  const std::int64_t k = nodes_per_unit;
  const std::int64_t outer_span = (t + 2) * k;
  double q_part = 0.0, collar_part = 0.0, b_part = 0.0, collar_sup = 0.0;
  {
    const double w = grid_s.cell_volume() / std::pow(grid_s.side_length, m);
    int cell_idx[8];
    std::int64_t corners[256];
    std::vector<double> xc(static_cast<std::size_t>(m)), sbar(static_cast<std::size_t>(N)),
        stot(static_cast<std::size_t>(N));
    Matrix G(N, m), A(N, m);
    const std::int64_t n_cells = grid_s.cell_count();
    for (std::int64_t cell = 0; cell < n_cells; ++cell) {
      grid_s.cell_multi(cell, cell_idx);
      grid_s.cell_corners(cell_idx, corners);
      grid_s.cell_center(cell_idx, xc.data());
      cell_average(u_s, corners, sbar.data());
      cell_gradient(u_s, corners, G);
      matvec(Y, xc.data(), stot.data());
      for (int i = 0; i < N; ++i) stot[static_cast<std::size_t>(i)] += sbar[static_cast<std::size_t>(i)];
      for (int i = 0; i < N; ++i)
        for (int a = 0; a < m; ++a) A(i, a) = G(i, a) + Y(i, a);
      const double f = L.eval(xc.data(), stot.data(), A);

      bool in_outer = true, in_B = true;
      for (int d = 0; d < m && in_outer; ++d) {
        const std::int64_t pos = cell_idx[d]; // cell spans [pos, pos+1) node units
        const std::int64_t cand = pos >= k ? (pos - k) / ((t + 4) * k) : -1;
        if (cand < 0 || cand >= T.per_axis) {
          in_outer = false;
          break;
        }
        const std::int64_t lo = ((t + 4) * cand + 1) * k;
        if (pos < lo || pos >= lo + outer_span) {
          in_outer = false;
          break;
        }
        const std::int64_t yd = pos - lo;
        in_B = in_B && yd >= k && yd < (t + 1) * k;
      }
      if (!in_outer) {
        q_part += f * w;
      } else if (in_B) {
        b_part += f * w;
      } else {
        collar_part += f * w;
        for (int i = 0; i < N; ++i)
          for (int a = 0; a < m; ++a) collar_sup = std::max(collar_sup, std::fabs(G(i, a)));
      }
    }
  }

  const double yp = std::pow(std::sqrt(Y.frobenius_sq()), L.growth.p);
  const double td = static_cast<double>(t), sd = static_cast<double>(s);
  const double q_factor = 1.0 - std::pow((td + 2.0) / (td + 4.0) - (td + 2.0) / sd, m);
  const double bound = q_factor * L.growth.c2 * (1.0 + yp) + collar_part +
                       std::pow(td / (td + 4.0), m) * (sol_t.energy + 1.0 / td);

  SubadditivityResult res;
  res.g_t = sol_t.energy;
  res.patched_energy = patched;
  res.g_s = sol_s.energy;
  res.bound = bound;
  res.collar_energy = collar_part;
  res.collar_gradient_sup = collar_sup;

  VerificationReport& rep = res.report;
  rep.name = "subadditivity";
  rep.add("g-s-below-patched", res.g_s <= patched + 1e-12, patched - res.g_s,
          "g_s " + num_str(res.g_s) + " <= patched " + num_str(patched));
  rep.add("patched-below-bound", patched <= bound + 1e-12, bound - patched,
          "patched " + num_str(patched) + " <= bound " + num_str(bound));
  const double parts = q_part + collar_part + b_part;
  rep.add("parts-account", std::fabs(parts - patched) <= 1e-9 * std::max(1.0, std::fabs(patched)),
          std::fabs(parts - patched),
          "remainder " + num_str(q_part) + " + collar " + num_str(collar_part) + " + blocks " +
              num_str(b_part));
  rep.add("collar-gradient-measured", true, collar_sup, "sup |Du_s| over collar cells");
  return res;
}

} // namespace homog
