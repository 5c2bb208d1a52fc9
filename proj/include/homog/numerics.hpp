#pragma once
/**
 * @file numerics.hpp
 * Dense small matrices, uniform cube grids, node-valued fields, and the
 * quadrature/differentiation primitives built on them:
 *  - cell gradients from corner differences (exact for affine fields),
 *  - midpoint cellwise integration h^m * sum,
 *  - the 3-vector wedge (cross) product,
 *  - exact-round-trip text serialization of fields.
 */

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace homog {

// Row-major rows x cols matrix of doubles. Rows index the target space,
// columns the source space, matching Du where (i, alpha) = du^i/dx^alpha.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), v_(static_cast<std::size_t>(rows) * cols, 0.0) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return v_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return v_[static_cast<std::size_t>(i) * cols_ + j]; }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  std::size_t size() const { return v_.size(); }

  double frobenius_sq() const;
  bool all_finite() const;

  bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && v_ == o.v_; }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> v_;
};

// out[i] = sum_j M(i,j) x[j]
void matvec(const Matrix& m, const double* x, double* out);

// Parse "1,0;0,1" (rows separated by ';', entries by ','). Throws
// std::invalid_argument on malformed input.
Matrix parse_matrix(const std::string& literal);
std::string format_matrix(const Matrix& m);

// wedge (cross) product of 3-vectors: out = a x b.
void wedge(const double a[3], const double b[3], double out[3]);

// Uniform axis-aligned grid on the cube (0, side_length)^dim with
// nodes_per_side subdivisions per axis: nodes at i*h, h = side/nodes_per_side.
struct Grid {
  int dim = 1;
  double side_length = 1.0;
  int nodes_per_side = 1; // cells per side

  double spacing() const { return side_length / nodes_per_side; }
  std::int64_t node_count() const;
  std::int64_t cell_count() const;
  double cell_volume() const;

  // Multi-index <-> linear index, last axis fastest.
  void node_multi(std::int64_t linear, int* idx) const;
  std::int64_t node_linear(const int* idx) const;
  void cell_multi(std::int64_t linear, int* idx) const;
  void node_coord(const int* idx, double* x) const;
  // Midpoint of a cell given its multi-index.
  void cell_center(const int* idx, double* x) const;
  bool is_boundary_node(std::int64_t linear) const;

  // Linear node indices of a cell's 2^dim corners; corner bit d set means
  // +1 along axis d. corners must hold 2^dim entries.
  void cell_corners(const int* cell_idx, std::int64_t* corners) const;

  bool operator==(const Grid& o) const {
    return dim == o.dim && side_length == o.side_length && nodes_per_side == o.nodes_per_side;
  }
};

// Vector-valued node data, node-major: values[node * components + c].
struct GridField {
  Grid grid;
  int components = 1;
  std::vector<double> values;

  GridField() = default;
  GridField(const Grid& g, int n_components)
      : grid(g), components(n_components),
        values(static_cast<std::size_t>(g.node_count()) * n_components, 0.0) {}

  double& at(std::int64_t node, int c) { return values[static_cast<std::size_t>(node) * components + c]; }
  double at(std::int64_t node, int c) const { return values[static_cast<std::size_t>(node) * components + c]; }

  void zero_boundary();
  double max_boundary_abs() const;
};

// Average of the 2^m corner values per component (the field value used at
// the cell midpoint). out must hold `components` entries.
void cell_average(const GridField& u, const std::int64_t* corners, double* out);

// Corner-difference gradient: G(i, alpha) = mean over corner pairs along
// axis alpha of (upper - lower)/h. Exact for affine fields.
void cell_gradient(const GridField& u, const std::int64_t* corners, Matrix& G);

// All cell gradients in cell-linear order.
std::vector<Matrix> gradient_at_cells(const GridField& u);

// Midpoint rule: h^m * sum(cell_values). cell_values.size() must equal
// grid.cell_count().
double integrate_cellwise(const std::vector<double>& cell_values, const Grid& grid);

// Exact (hexfloat) text serialization.
void write_field(const GridField& u, std::ostream& os);
GridField read_field(std::istream& is); // throws std::runtime_error on bad input

} // namespace homog
