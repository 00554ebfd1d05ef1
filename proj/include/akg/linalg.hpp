#pragma once

#include <stdexcept>
#include <unordered_map>

#include "akg/scalar.hpp"

namespace akg {

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Laplace expansion along rows, memoized on the set of remaining columns.
template <class S>
S minor_det(const Mat<S>& m, int row, unsigned cols, std::unordered_map<unsigned, S>& memo) {
  if (row == m.rows()) return S(1);
  if (auto it = memo.find(cols); it != memo.end()) return it->second;
  S acc(0);
  int sign = 1;
  for (int c = 0; c < m.cols(); ++c) {
    if (!(cols & (1U << c))) continue;
    if (!Calculus<S>::is_literal_zero(m(row, c))) {
      S term = m(row, c) * minor_det(m, row + 1, cols & ~(1U << c), memo);
      acc = sign > 0 ? acc + term : acc - term;
    }
    sign = -sign;
  }
  memo.emplace(cols, acc);
  return acc;
}

template <class S>
Mat<S> drop(const Mat<S>& m, int r, int c) {
  Mat<S> out(m.rows() - 1, m.cols() - 1);
  for (int i = 0, ii = 0; i < m.rows(); ++i) {
    if (i == r) continue;
    for (int j = 0, jj = 0; j < m.cols(); ++j) {
      if (j == c) continue;
      out(ii, jj++) = m(i, j);
    }
    ++ii;
  }
  return out;
}

}  // namespace detail

template <class S>
S determinant(const Mat<S>& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  if (m.rows() > 16) throw std::invalid_argument("matrix too large for cofactor expansion");
  std::unordered_map<unsigned, S> memo;
  return detail::minor_det(m, 0, (1U << m.cols()) - 1, memo);
}

template <class S>
Mat<S> adjugate(const Mat<S>& m) {
  const int n = static_cast<int>(m.rows());
  Mat<S> adj(n, n);
  if (n == 1) {
    adj(0, 0) = S(1);
    return adj;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      S d = determinant(detail::drop(m, i, j));
      adj(j, i) = ((i + j) % 2 == 0) ? d : -d;
    }
  }
  return adj;
}

/// adj(m) / det(m). Throws SingularMatrixError when the determinant is
/// literally zero (Expr) or exactly zero at the expansion point (Jet).
template <class S>
Mat<S> inverse(const Mat<S>& m) {
  const S det = determinant(m);
  if constexpr (std::is_same_v<S, Expr>) {
    if (det.is_zero_constant()) throw SingularMatrixError("matrix is symbolically singular");
  } else {
    if (det.value() == 0) throw SingularMatrixError("matrix is singular at the sample point");
  }
  Mat<S> adj = adjugate(m);
  const S inv = S(1) / det;
  for (int i = 0; i < adj.rows(); ++i)
    for (int j = 0; j < adj.cols(); ++j) adj(i, j) = adj(i, j) * inv;
  return adj;
}

}  // namespace akg
