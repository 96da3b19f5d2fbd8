#include "sog/stp.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sog {

LogicalMatrix LogicalMatrix::identity(int n) {
  LogicalMatrix m;
  m.rows = n;
  m.cols.resize(n);
  for (int i = 0; i < n; ++i)
    m.cols[i] = i + 1;
  return m;
}

LogicalMatrix LogicalMatrix::canonical_vector(int i, int n) {
  LogicalMatrix m;
  m.rows = n;
  m.cols = {i};
  return m;
}

std::string LogicalMatrix::to_string() const {
  std::ostringstream out;
  out << "delta_" << rows << '[';
  for (size_t j = 0; j < cols.size(); ++j) {
    if (j)
      out << ' ';
    out << cols[j];
  }
  out << ']';
  return out.str();
}

DenseMatrix to_dense(const LogicalMatrix &m) {
  DenseMatrix d;
  d.rows = m.rows;
  d.cols = m.col_count();
  d.a.assign((size_t)d.rows * d.cols, 0);
  for (int j = 0; j < d.cols; ++j)
    d.at(m.cols[j] - 1, j) = 1;
  return d;
}

DenseMatrix kron(const DenseMatrix &x, const DenseMatrix &y) {
  DenseMatrix r;
  r.rows = x.rows * y.rows;
  r.cols = x.cols * y.cols;
  r.a.assign((size_t)r.rows * r.cols, 0);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) {
      if (x.at(i, j) == 0)
        continue;
      for (int p = 0; p < y.rows; ++p)
        for (int q = 0; q < y.cols; ++q)
          r.at(i * y.rows + p, j * y.cols + q) = x.at(i, j) * y.at(p, q);
    }
  return r;
}

DenseMatrix multiply(const DenseMatrix &x, const DenseMatrix &y) {
  if (x.cols != y.rows)
    throw std::invalid_argument("multiply: dimension mismatch");
  DenseMatrix r;
  r.rows = x.rows;
  r.cols = y.cols;
  r.a.assign((size_t)r.rows * r.cols, 0);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      long long v = x.at(i, k);
      if (v == 0)
        continue;
      for (int j = 0; j < y.cols; ++j)
        r.at(i, j) += v * y.at(k, j);
    }
  return r;
}

DenseMatrix stp(const DenseMatrix &x, const DenseMatrix &y) {
  long long t = std::lcm((long long)x.cols, (long long)y.rows);
  auto eye = [](int n) {
    DenseMatrix d;
    d.rows = d.cols = n;
    d.a.assign((size_t)n * n, 0);
    for (int i = 0; i < n; ++i)
      d.at(i, i) = 1;
    return d;
  };
  DenseMatrix xl = kron(x, eye((int)(t / x.cols)));
  DenseMatrix yr = kron(y, eye((int)(t / y.rows)));
  return multiply(xl, yr);
}

LogicalMatrix stp(const LogicalMatrix &x, const LogicalMatrix &y) {
  int t = (int)std::lcm((long long)x.col_count(), (long long)y.rows);
  int sx = t / x.col_count(); // x (x) I_sx
  int sy = t / y.rows;        // y (x) I_sy
  // Column j of (y (x) I_sy) is e at index (y.cols[q]-1)*sy + r, where
  // j = q*sy + r. Feeding that into (x (x) I_sx) picks its column and maps
  // through x the same way.
  LogicalMatrix r;
  r.rows = x.rows * sx;
  r.cols.resize((size_t)y.col_count() * sy);
  for (int q = 0; q < y.col_count(); ++q) {
    for (int rr = 0; rr < sy; ++rr) {
      int mid = (y.cols[q] - 1) * sy + rr; // 0-based row in the middle space
      int xq = mid / sx;                   // column of x selected
      int xr = mid % sx;
      r.cols[(size_t)q * sy + rr] = (x.cols[xq] - 1) * sx + xr + 1;
    }
  }
  return r;
}

int canonical_arg_index(const std::vector<char> &values) {
  int idx = 0;
  for (char v : values)
    idx = idx * 2 + (v ? 0 : 1);
  return idx + 1;
}

LogicalMatrix structure_matrix(const std::vector<char> &table, int arity) {
  if ((size_t)(1u << arity) != table.size())
    throw std::invalid_argument("structure_matrix: table size mismatch");
  LogicalMatrix m;
  m.rows = 2;
  m.cols.resize(1u << arity);
  for (int col = 0; col < (1 << arity); ++col) {
    // Column col (0-based) encodes x1..xk with x1 heaviest and bit 1
    // meaning value 0 (canonical e1 = true comes first).
    std::vector<char> values(arity);
    int tt_idx = 0;
    for (int q = 0; q < arity; ++q) {
      char bit = (char)(((col >> (arity - 1 - q)) & 1) == 0);
      values[q] = bit;
      if (bit)
        tt_idx |= 1 << q; // truth tables index with input q at bit q-1
    }
    m.cols[col] = canonical_index(table[tt_idx] != 0);
  }
  return m;
}

LogicalMatrix structure_matrix(const BooleanExpression &f, int arity) {
  std::vector<int> vars;
  f.collect_vars(vars);
  for (int v : vars)
    if (v < 1 || v > arity)
      throw std::invalid_argument("structure_matrix: variable out of range");
  std::vector<char> table(1u << arity, 0);
  std::vector<char> values(arity + 1, 0);
  for (int idx = 0; idx < (1 << arity); ++idx) {
    for (int q = 1; q <= arity; ++q)
      values[q] = (idx >> (q - 1)) & 1;
    table[idx] = f.eval(values) ? 1 : 0;
  }
  return structure_matrix(table, arity);
}

LogicalMatrix swap_matrix(int m, int n) {
  LogicalMatrix w;
  w.rows = m * n;
  w.cols.resize((size_t)m * n);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= n; ++j)
      w.cols[(i - 1) * n + (j - 1)] = (j - 1) * m + i;
  return w;
}

LogicalMatrix dummy_matrix_front() {
  LogicalMatrix d;
  d.rows = 2;
  d.cols = {1, 1, 2, 2};
  return d;
}

LogicalMatrix dummy_matrix_rear() {
  LogicalMatrix d;
  d.rows = 2;
  d.cols = {1, 2, 1, 2};
  return d;
}

LogicalMatrix power_reducing_matrix(int k) {
  LogicalMatrix m;
  m.rows = k * k;
  m.cols.resize(k);
  for (int i = 1; i <= k; ++i)
    m.cols[i - 1] = (i - 1) * k + i;
  return m;
}

LogicalMatrix negation_matrix() {
  LogicalMatrix m;
  m.rows = 2;
  m.cols = {2, 1};
  return m;
}

LogicalMatrix xor_matrix() {
  LogicalMatrix m;
  m.rows = 2;
  m.cols = {2, 1, 1, 2};
  return m;
}

LogicalMatrix and_matrix() {
  LogicalMatrix m;
  m.rows = 2;
  m.cols = {1, 2, 2, 2};
  return m;
}

LogicalMatrix or_matrix() {
  LogicalMatrix m;
  m.rows = 2;
  m.cols = {1, 1, 1, 2};
  return m;
}

} // namespace sog
