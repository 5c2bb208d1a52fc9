#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "homog/numerics.hpp"
#include "homog/rng.hpp"

using namespace homog;

TEST_CASE("matrix basics") {
  Matrix m(2, 2);
  m(0, 0) = 1;
  m(0, 1) = 2;
  m(1, 0) = 3;
  m(1, 1) = 4;
  CHECK(m.frobenius_sq() == 30.0);
  CHECK(Matrix::identity(3).frobenius_sq() == 3.0);
  CHECK(m == m);
  CHECK_FALSE(m == Matrix(2, 2));
  CHECK(m.all_finite());
  Matrix bad(1, 1);
  bad(0, 0) = std::nan("");
  CHECK_FALSE(bad.all_finite());

  double x[2] = {5, 6}, out[2];
  matvec(m, x, out);
  CHECK(out[0] == 17.0);
  CHECK(out[1] == 39.0);
}

TEST_CASE("matrix literal parsing") {
  const Matrix y = parse_matrix("1,1;1.41,1.41");
  CHECK(y.rows() == 2);
  CHECK(y.cols() == 2);
  CHECK(y(1, 0) == 1.41);

  const Matrix one = parse_matrix("3");
  CHECK(one.rows() == 1);
  CHECK(one.cols() == 1);
  CHECK(one(0, 0) == 3.0);

  CHECK_THROWS_AS(parse_matrix(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_matrix("1,;2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_matrix("1;2,3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_matrix("a,b"), std::invalid_argument);
  CHECK_THROWS_AS(parse_matrix("1 2"), std::invalid_argument);
}

TEST_CASE("matrix serialization round-trips exactly") {
  Rng rng(42);
  Matrix m(3, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = rng.uniform(-10.0, 10.0);
  const Matrix back = parse_matrix(format_matrix(m));
  CHECK(back == m);
}

TEST_CASE("wedge product") {
  const double e1[3] = {1, 0, 0}, e2[3] = {0, 1, 0}, e23[3] = {0, 1, 1};
  double out[3];
  wedge(e1, e2, out);
  CHECK(out[0] == 0.0);
  CHECK(out[1] == 0.0);
  CHECK(out[2] == 1.0);
  wedge(e1, e23, out);
  CHECK(out[0] == 0.0);
  CHECK(out[1] == -1.0);
  CHECK(out[2] == 1.0);

  // Lagrange identity |a x b|^2 = |a|^2 |b|^2 - (a.b)^2.
  Rng rng(7);
  for (int k = 0; k < 50; ++k) {
    double a[3], b[3], w[3];
    for (int i = 0; i < 3; ++i) {
      a[i] = rng.uniform(-2.0, 2.0);
      b[i] = rng.uniform(-2.0, 2.0);
    }
    wedge(a, b, w);
    const double lhs = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
    const double na = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
    const double nb = b[0] * b[0] + b[1] * b[1] + b[2] * b[2];
    const double ab = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    CHECK(lhs == doctest::Approx(na * nb - ab * ab).epsilon(1e-12));
  }
}

TEST_CASE("grid counting and indexing") {
  Grid g;
  g.dim = 2;
  g.side_length = 1.0;
  g.nodes_per_side = 4;
  CHECK(g.node_count() == 25);
  CHECK(g.cell_count() == 16);
  CHECK(g.spacing() == 0.25);
  CHECK(g.cell_volume() == doctest::Approx(0.0625).epsilon(1e-15));

  // Last axis fastest.
  int idx[2] = {0, 1};
  CHECK(g.node_linear(idx) == 1);
  idx[0] = 1;
  idx[1] = 0;
  CHECK(g.node_linear(idx) == 5);

  int back[2];
  for (std::int64_t n = 0; n < g.node_count(); ++n) {
    g.node_multi(n, back);
    CHECK(g.node_linear(back) == n);
  }

  int boundary = 0;
  for (std::int64_t n = 0; n < g.node_count(); ++n)
    if (g.is_boundary_node(n)) ++boundary;
  CHECK(boundary == 16); // 25 nodes, 3x3 interior

  int c0[2] = {0, 0};
  double x[2];
  g.cell_center(c0, x);
  CHECK(x[0] == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(x[1] == doctest::Approx(0.125).epsilon(1e-15));

  int nidx[2] = {2, 3};
  g.node_coord(nidx, x);
  CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(x[1] == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("1d corner-difference gradient") {
  Grid g;
  g.dim = 1;
  g.side_length = 1.0;
  g.nodes_per_side = 2;
  GridField u(g, 1);
  u.at(1, 0) = 0.5; // values (0, 0.5, 0)
  const std::vector<Matrix> grads = gradient_at_cells(u);
  REQUIRE(grads.size() == 2);
  CHECK(grads[0](0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(grads[1](0, 0) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("midpoint integration oracle") {
  Grid g;
  g.dim = 1;
  g.side_length = 1.0;
  g.nodes_per_side = 4;
  CHECK(integrate_cellwise({1.0, 2.0, 3.0, 4.0}, g) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK_THROWS_AS(integrate_cellwise({1.0}, g), std::invalid_argument);
}

TEST_CASE("affine fields are reproduced exactly") {
  Grid g;
  g.dim = 2;
  g.side_length = 2.0;
  g.nodes_per_side = 5;
  GridField u(g, 2);
  Matrix B(2, 2);
  B(0, 0) = 1.5;
  B(0, 1) = -0.25;
  B(1, 0) = 0.75;
  B(1, 1) = 2.0;
  const double a[2] = {0.3, -0.7};
  for (std::int64_t n = 0; n < g.node_count(); ++n) {
    int idx[2];
    double x[2];
    g.node_multi(n, idx);
    g.node_coord(idx, x);
    for (int c = 0; c < 2; ++c) u.at(n, c) = a[c] + B(c, 0) * x[0] + B(c, 1) * x[1];
  }

  const std::vector<Matrix> grads = gradient_at_cells(u);
  std::vector<std::int64_t> corners(4);
  for (std::int64_t cell = 0; cell < g.cell_count(); ++cell) {
    int cidx[2];
    double xc[2], avg[2];
    g.cell_multi(cell, cidx);
    g.cell_center(cidx, xc);
    g.cell_corners(cidx, corners.data());
    cell_average(u, corners.data(), avg);
    for (int c = 0; c < 2; ++c)
      CHECK(avg[c] == doctest::Approx(a[c] + B(c, 0) * xc[0] + B(c, 1) * xc[1]).epsilon(1e-13));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(grads[cell](i, j) == doctest::Approx(B(i, j)).epsilon(1e-13));
  }
}

TEST_CASE("boundary helpers") {
  Grid g;
  g.dim = 2;
  g.side_length = 1.0;
  g.nodes_per_side = 3;
  GridField u(g, 1);
  for (std::int64_t n = 0; n < g.node_count(); ++n) u.at(n, 0) = 1.0 + static_cast<double>(n);
  CHECK(u.max_boundary_abs() > 0.0);
  u.zero_boundary();
  CHECK(u.max_boundary_abs() == 0.0);
  int interior = 0;
  for (std::int64_t n = 0; n < g.node_count(); ++n)
    if (u.at(n, 0) != 0.0) ++interior;
  CHECK(interior == 4);
}

TEST_CASE("field serialization round-trips bitwise") {
  Grid g;
  g.dim = 2;
  g.side_length = 3.0;
  g.nodes_per_side = 4;
  GridField u(g, 3);
  Rng rng(99);
  for (double& v : u.values) v = rng.uniform(-1.0, 1.0);

  std::stringstream ss;
  write_field(u, ss);
  const GridField back = read_field(ss);
  CHECK(back.grid == g);
  CHECK(back.components == 3);
  REQUIRE(back.values.size() == u.values.size());
  for (std::size_t i = 0; i < u.values.size(); ++i) CHECK(back.values[i] == u.values[i]);

  std::stringstream garbage("not a field");
  CHECK_THROWS_AS(read_field(garbage), std::runtime_error);
}
