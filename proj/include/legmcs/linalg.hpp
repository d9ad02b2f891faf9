#pragma once

#include <optional>
#include <vector>

#include "legmcs/fp.hpp"

namespace legmcs {

/// Row echelon form over F_p with recorded pivot columns. Pivot choice is the
/// first nonzero entry scanning down each column, so results are deterministic.
struct Echelon {
  Mat r;                    // reduced row echelon form
  std::vector<int> pivots;  // pivot column per pivot row
  int rank() const { return static_cast<int>(pivots.size()); }
};

template <typename Derived>
Echelon row_reduce(const Eigen::MatrixBase<Derived>& a) {
  Echelon e;
  e.r = a.eval();
  Mat& m = e.r;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index piv = -1;
    for (Eigen::Index i = row; i < m.rows(); ++i)
      if (!m(i, col).is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    m.row(piv).swap(m.row(row));
    Fp inv = m(row, col).inverse();
    for (Eigen::Index j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      Fp c = m(i, col);
      for (Eigen::Index j = col; j < m.cols(); ++j) m(i, j) -= c * m(row, j);
    }
    e.pivots.push_back(static_cast<int>(col));
    ++row;
  }
  return e;
}

template <typename Derived>
int rank(const Eigen::MatrixBase<Derived>& a) {
  return row_reduce(a).rank();
}

/// Basis of ker(a) as columns. The ambient field is needed when a has no rows.
inline Mat kernel_basis(const Field& F, const Mat& a) {
  Echelon e = row_reduce(a);
  const Eigen::Index n = a.cols();
  std::vector<bool> is_pivot(static_cast<size_t>(n), false);
  for (int c : e.pivots) is_pivot[static_cast<size_t>(c)] = true;
  Mat k = zeros(F, n, n - e.rank());
  Eigen::Index kc = 0;
  for (Eigen::Index free = 0; free < n; ++free) {
    if (is_pivot[static_cast<size_t>(free)]) continue;
    k(free, kc) = Fp(1, F);
    for (int prow = 0; prow < e.rank(); ++prow)
      k(e.pivots[static_cast<size_t>(prow)], kc) = -e.r(prow, free);
    ++kc;
  }
  return k;
}

inline Mat inverse(const Mat& a) {
  if (a.rows() != a.cols()) fail("NotInvertible", "inverse of non-square matrix");
  const Eigen::Index n = a.rows();
  if (n == 0) return a;
  Mat aug(n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      aug(i, j) = a(i, j);
      aug(i, n + j) = Fp(i == j ? 1 : 0);
    }
  Echelon e = row_reduce(aug);
  if (e.rank() < n || e.pivots.back() >= n) fail("NotInvertible", "singular matrix");
  return e.r.block(0, n, n, n);
}

/// Parametrization of {x : a x = b}: a particular solution plus a kernel basis,
/// or empty when the system is inconsistent.
struct AffineSolution {
  bool empty = true;
  Vec particular;
  Mat kernel;  // columns span the solution space's direction
};

inline AffineSolution solve_affine(const Field& F, const Mat& a, const Vec& b) {
  if (a.rows() != b.rows()) fail("DimensionMismatch", "solve_affine: rows of A and b differ");
  AffineSolution s;
  const Eigen::Index n = a.cols();
  Mat aug(a.rows(), n + 1);
  if (a.rows() > 0) {
    if (n > 0) aug.block(0, 0, a.rows(), n) = a;
    aug.col(n) = b;
  }
  Echelon e = row_reduce(aug);
  for (int prow = 0; prow < e.rank(); ++prow)
    if (e.pivots[static_cast<size_t>(prow)] == static_cast<int>(n)) return s;  // 0 = nonzero
  s.empty = false;
  s.particular = zero_vec(F, n);
  for (int prow = 0; prow < e.rank(); ++prow)
    s.particular(e.pivots[static_cast<size_t>(prow)]) = e.r(prow, n);
  s.kernel = n > 0 ? kernel_basis(F, a) : zeros(F, 0, 0);
  return s;
}

/// Solve a x = b exactly, failing when inconsistent (used where consistency
/// is an invariant, e.g. expressing a vector in a subspace basis).
inline Vec solve_exact(const Field& F, const Mat& a, const Vec& b) {
  AffineSolution s = solve_affine(F, a, b);
  if (s.empty) fail("Inconsistent", "linear system has no solution");
  return s.particular;
}

}  // namespace legmcs
