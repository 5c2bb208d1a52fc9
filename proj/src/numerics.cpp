#include "homog/numerics.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "homog/kernels.hpp"

namespace homog {

double Matrix::frobenius_sq() const {
  return kernels::dot(v_.data(), v_.data(), v_.size());
}

bool Matrix::all_finite() const {
  for (double x : v_)
    if (!std::isfinite(x)) return false;
  return true;
}

void matvec(const Matrix& m, const double* x, double* out) {
  for (int i = 0; i < m.rows(); ++i) {
    double acc = 0.0;
    for (int j = 0; j < m.cols(); ++j) acc += m(i, j) * x[j];
    out[i] = acc;
  }
}

Matrix parse_matrix(const std::string& literal) {
  std::vector<std::vector<double>> rows;
  if (!literal.empty() && literal.back() == ';')
    throw std::invalid_argument("trailing ';' in matrix literal: '" + literal + "'");
  std::stringstream ss(literal);
  std::string row;
  while (std::getline(ss, row, ';')) {
    if (!row.empty() && row.back() == ',')
      throw std::invalid_argument("trailing ',' in matrix row: '" + row + "'");
    std::vector<double> entries;
    std::stringstream rs(row);
    std::string tok;
    while (std::getline(rs, tok, ',')) {
      std::size_t pos = 0;
      double val;
      try {
        val = std::stod(tok, &pos);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad matrix entry: '" + tok + "'");
      }
      while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
      if (pos != tok.size()) throw std::invalid_argument("bad matrix entry: '" + tok + "'");
      entries.push_back(val);
    }
    if (entries.empty()) throw std::invalid_argument("empty matrix row in '" + literal + "'");
    rows.push_back(std::move(entries));
  }
  if (rows.empty()) throw std::invalid_argument("empty matrix literal");
  for (const auto& r : rows)
    if (r.size() != rows[0].size())
      throw std::invalid_argument("ragged matrix literal: '" + literal + "'");
  Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

std::string format_matrix(const Matrix& m) {
  std::string out;
  char buf[64];
  for (int i = 0; i < m.rows(); ++i) {
    if (i) out += ';';
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out += buf;
    }
  }
  return out;
}

void wedge(const double a[3], const double b[3], double out[3]) {
  out[0] = a[1] * b[2] - a[2] * b[1];
  out[1] = a[2] * b[0] - a[0] * b[2];
  out[2] = a[0] * b[1] - a[1] * b[0];
}

std::int64_t Grid::node_count() const {
  std::int64_t n = 1;
  for (int d = 0; d < dim; ++d) n *= nodes_per_side + 1;
  return n;
}

std::int64_t Grid::cell_count() const {
  std::int64_t n = 1;
  for (int d = 0; d < dim; ++d) n *= nodes_per_side;
  return n;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int d = 0; d < dim; ++d) v *= spacing();
  return v;
}

void Grid::node_multi(std::int64_t linear, int* idx) const {
  const int stride = nodes_per_side + 1;
  for (int d = dim - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(linear % stride);
    linear /= stride;
  }
}

std::int64_t Grid::node_linear(const int* idx) const {
  const int stride = nodes_per_side + 1;
  std::int64_t linear = 0;
  for (int d = 0; d < dim; ++d) linear = linear * stride + idx[d];
  return linear;
}

void Grid::cell_multi(std::int64_t linear, int* idx) const {
  for (int d = dim - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(linear % nodes_per_side);
    linear /= nodes_per_side;
  }
}

void Grid::node_coord(const int* idx, double* x) const {
  for (int d = 0; d < dim; ++d) x[d] = idx[d] * spacing();
}

void Grid::cell_center(const int* idx, double* x) const {
  for (int d = 0; d < dim; ++d) x[d] = (idx[d] + 0.5) * spacing();
}

bool Grid::is_boundary_node(std::int64_t linear) const {
  const int stride = nodes_per_side + 1;
  for (int d = dim - 1; d >= 0; --d) {
    const int i = static_cast<int>(linear % stride);
    if (i == 0 || i == nodes_per_side) return true;
    linear /= stride;
  }
  return false;
}

void Grid::cell_corners(const int* cell_idx, std::int64_t* corners) const {
  const int n_corners = 1 << dim;
  int node_idx[8];
  for (int c = 0; c < n_corners; ++c) {
    for (int d = 0; d < dim; ++d) node_idx[d] = cell_idx[d] + ((c >> (dim - 1 - d)) & 1);
    corners[c] = node_linear(node_idx);
  }
}

void GridField::zero_boundary() {
  const std::int64_t n = grid.node_count();
  for (std::int64_t node = 0; node < n; ++node)
    if (grid.is_boundary_node(node))
      for (int c = 0; c < components; ++c) at(node, c) = 0.0;
}

double GridField::max_boundary_abs() const {
  double m = 0.0;
  const std::int64_t n = grid.node_count();
  for (std::int64_t node = 0; node < n; ++node)
    if (grid.is_boundary_node(node))
      for (int c = 0; c < components; ++c) m = std::max(m, std::fabs(at(node, c)));
  return m;
}

void cell_average(const GridField& u, const std::int64_t* corners, double* out) {
  const int n_corners = 1 << u.grid.dim;
  const double w = 1.0 / n_corners;
  for (int c = 0; c < u.components; ++c) {
    double acc = 0.0;
    for (int k = 0; k < n_corners; ++k) acc += u.at(corners[k], c);
    out[c] = acc * w;
  }
}

void cell_gradient(const GridField& u, const std::int64_t* corners, Matrix& G) {
  const int m = u.grid.dim;
  const int n_corners = 1 << m;
  const double scale = 1.0 / ((n_corners / 2) * u.grid.spacing());
  for (int i = 0; i < u.components; ++i) {
    for (int a = 0; a < m; ++a) {
      const int bit = m - 1 - a;
      double acc = 0.0;
      for (int k = 0; k < n_corners; ++k) {
        if ((k >> bit) & 1)
          acc += u.at(corners[k], i) - u.at(corners[k ^ (1 << bit)], i);
      }
      G(i, a) = acc * scale;
    }
  }
}

std::vector<Matrix> gradient_at_cells(const GridField& u) {
  const std::int64_t n_cells = u.grid.cell_count();
  std::vector<Matrix> out(static_cast<std::size_t>(n_cells), Matrix(u.components, u.grid.dim));
  int cell_idx[8];
  std::int64_t corners[256];
  for (std::int64_t cell = 0; cell < n_cells; ++cell) {
    u.grid.cell_multi(cell, cell_idx);
    u.grid.cell_corners(cell_idx, corners);
    cell_gradient(u, corners, out[static_cast<std::size_t>(cell)]);
  }
  return out;
}

double integrate_cellwise(const std::vector<double>& cell_values, const Grid& grid) {
  if (static_cast<std::int64_t>(cell_values.size()) != grid.cell_count())
    throw std::invalid_argument("integrate_cellwise: value count != cell count");
  return grid.cell_volume() * kernels::sum(cell_values.data(), cell_values.size());
}

namespace {
std::string hex_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}
} // namespace

void write_field(const GridField& u, std::ostream& os) {
  os << "gridfield 1\n";
  os << "dim " << u.grid.dim << "\n";
  os << "side_length " << hex_double(u.grid.side_length) << "\n";
  os << "nodes_per_side " << u.grid.nodes_per_side << "\n";
  os << "components " << u.components << "\n";
  for (double v : u.values) os << hex_double(v) << "\n";
}

GridField read_field(std::istream& is) {
  auto fail = [](const std::string& why) -> GridField {
    throw std::runtime_error("read_field: " + why);
  };
  std::string tag;
  int version = 0;
  if (!(is >> tag >> version) || tag != "gridfield" || version != 1)
    return fail("bad header");
  GridField u;
  std::string key, val;
  if (!(is >> key >> u.grid.dim) || key != "dim") return fail("bad dim");
  if (!(is >> key >> val) || key != "side_length") return fail("bad side_length");
  u.grid.side_length = std::strtod(val.c_str(), nullptr);
  if (!(is >> key >> u.grid.nodes_per_side) || key != "nodes_per_side") return fail("bad nodes_per_side");
  if (!(is >> key >> u.components) || key != "components") return fail("bad components");
  if (u.grid.dim < 1 || u.grid.nodes_per_side < 1 || u.components < 1)
    return fail("bad sizes");
  const std::size_t count = static_cast<std::size_t>(u.grid.node_count()) * u.components;
  u.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!(is >> val)) return fail("short value list");
    char* end = nullptr;
    u.values[i] = std::strtod(val.c_str(), &end);
    if (end == val.c_str()) return fail("bad value '" + val + "'");
  }
  return u;
}

} // namespace homog
