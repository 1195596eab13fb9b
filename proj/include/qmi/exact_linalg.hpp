#pragma once

#include "qmi/rational.hpp"

#include <vector>

namespace qmi {

inline bool mat_equal(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

/// Reduced row echelon form in place; returns rank, pivot columns appended
/// to *pivots when given.
inline long rref_in_place(Mat& A, std::vector<long>* pivots = nullptr) {
  long rows = A.rows(), cols = A.cols();
  long r = 0;
  for (long col = 0; col < cols && r < rows; ++col) {
    long sel = -1;
    for (long i = r; i < rows; ++i)
      if (A(i, col) != 0) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    if (sel != r) A.row(sel).swap(A.row(r));
    A.row(r) /= A(r, col);
    for (long i = 0; i < rows; ++i)
      if (i != r && A(i, col) != 0) A.row(i) -= A(i, col) * A.row(r);
    if (pivots) pivots->push_back(col);
    ++r;
  }
  return r;
}

inline long mat_rank(Mat A) { return rref_in_place(A); }

inline bool is_invertible(const Mat& A) {
  return A.rows() == A.cols() && mat_rank(A) == A.rows();
}

inline Mat mat_inverse(const Mat& A) {
  long n = A.rows();
  Mat aug(n, 2 * n);
  aug.leftCols(n) = A;
  aug.rightCols(n) = Mat::Identity(n, n);
  if (rref_in_place(aug) != n) throw std::invalid_argument("mat_inverse: singular matrix");
  return aug.rightCols(n);
}

/// Row span in rref form supporting canonical reduction modulo the span.
struct RowSpan {
  Mat rows;                   // rank × dim, rref
  std::vector<long> pivots;   // pivot column per row
  std::vector<long> free_cols;

  long dim() const { return rows.cols(); }
  long rank() const { return rows.rows(); }

  /// Canonical representative of v modulo the span: zero at all pivot columns.
  Vec reduce(Vec v) const {
    for (long r = 0; r < rank(); ++r) {
      const Rational& c = v(pivots[r]);
      if (c != 0) v -= c * rows.row(r).transpose();
    }
    return v;
  }

  bool contains(const Vec& v) const { return is_zero_vec(reduce(v)); }
};

inline RowSpan row_span(const Mat& spanning_rows) {
  RowSpan s;
  Mat A = spanning_rows;
  std::vector<long> piv;
  long rank = rref_in_place(A, &piv);
  s.rows = A.topRows(rank);
  s.pivots = std::move(piv);
  long dim = A.cols();
  std::vector<bool> is_piv(dim, false);
  for (long p : s.pivots) is_piv[p] = true;
  for (long j = 0; j < dim; ++j)
    if (!is_piv[j]) s.free_cols.push_back(j);
  return s;
}

}  // namespace qmi
