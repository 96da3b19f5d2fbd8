#ifndef SOG_STP_HPP
#define SOG_STP_HPP

#include <string>
#include <vector>

#include "sog/boolnet.hpp"

namespace sog {

// Column-canonical Boolean matrix: every column is a standard basis vector,
// stored as one 1-based row index per column. The semi-tensor product of two
// such matrices reduces to index arithmetic.
struct LogicalMatrix {
  int rows = 0;
  std::vector<int> cols; // cols[j] = i means column j equals e_i

  int col_count() const { return (int)cols.size(); }
  bool operator==(const LogicalMatrix &o) const {
    return rows == o.rows && cols == o.cols;
  }

  static LogicalMatrix identity(int n);
  static LogicalMatrix canonical_vector(int i, int n); // e_i as n x 1
  std::string to_string() const;
};

// Dense integer matrix, used as the independent route for checking the
// logical fast path.
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<long long> a; // row-major
  long long &at(int i, int j) { return a[(size_t)i * cols + j]; }
  long long at(int i, int j) const { return a[(size_t)i * cols + j]; }
};

DenseMatrix to_dense(const LogicalMatrix &m);
DenseMatrix kron(const DenseMatrix &x, const DenseMatrix &y);
DenseMatrix multiply(const DenseMatrix &x, const DenseMatrix &y);

// A (x) I_{t/cols(A)} times B (x) I_{t/rows(B)}, t = lcm; equals the plain
// product when the inner dimensions already agree.
DenseMatrix stp(const DenseMatrix &x, const DenseMatrix &y);
LogicalMatrix stp(const LogicalMatrix &x, const LogicalMatrix &y);

// 2 x 2^k structure matrix: M_f applied to the canonical forms of
// x1 ... xk (value 1 -> e1, value 0 -> e2) yields the canonical form of f.
LogicalMatrix structure_matrix(const BooleanExpression &f, int arity);
LogicalMatrix structure_matrix(const std::vector<char> &table, int arity);

// Swap: W(u (x) v) = v (x) u for u of dim m, v of dim n.
LogicalMatrix swap_matrix(int m, int n);
// Front-maintaining dummy: M (x y) = x.
LogicalMatrix dummy_matrix_front();
// Rear-maintaining dummy: M (x y) = y (the one the pinning equations use).
LogicalMatrix dummy_matrix_rear();
// Power reducing: M e_i = e_i (x) e_i over dimension k.
LogicalMatrix power_reducing_matrix(int k);

LogicalMatrix negation_matrix(); // e1 <-> e2
LogicalMatrix xor_matrix();      // 2 x 4 structure matrix of ^
LogicalMatrix and_matrix();
LogicalMatrix or_matrix();

// Row index (1-based) of the canonical form of a Boolean value.
inline int canonical_index(bool v) { return v ? 1 : 2; }

// Column index (1-based) of x1 (x) ... (x) xk for the given values.
int canonical_arg_index(const std::vector<char> &values);

} // namespace sog

#endif
