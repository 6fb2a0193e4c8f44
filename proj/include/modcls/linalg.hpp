#pragma once

// Dense Gaussian elimination over an exact field (Rational or ScalarField).

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "modcls/error.hpp"
#include "modcls/scalar.hpp"

namespace modcls {

template <class F>
using Matrix = std::vector<std::vector<F>>;

namespace detail {

inline bool field_is_zero(const Rational& r) { return r == 0; }
inline bool field_is_zero(const ScalarField& f) { return f.is_zero(); }

// Smaller is a cheaper pivot; keeps intermediate expression swell down.
inline std::size_t pivot_cost(const Rational&) { return 0; }
inline std::size_t pivot_cost(const ScalarField& f) {
  return f.numerator().terms().size() + f.denominator().terms().size() + f.numerator().total_degree() +
         f.denominator().total_degree();
}

}  // namespace detail

/// Row-reduced echelon form of an augmented system.
template <class F>
struct Echelon {
  Matrix<F> rows;                 // reduced rows, pivot entries equal to one
  std::vector<int> pivot_columns;  // pivot column of each nonzero row
  int columns = 0;

  int rank() const { return static_cast<int>(pivot_columns.size()); }
};

/// Reduces A to reduced row echelon form; only the first `pivot_limit` columns are used as pivots.
template <class F>
Echelon<F> row_reduce(Matrix<F> a, int pivot_limit = -1) {
  Echelon<F> e;
  const std::size_t nrows = a.size();
  e.columns = nrows ? static_cast<int>(a[0].size()) : 0;
  if (pivot_limit < 0) pivot_limit = e.columns;
  std::size_t row = 0;
  for (int col = 0; col < pivot_limit && row < nrows; ++col) {
    std::optional<std::size_t> best;
    for (std::size_t r = row; r < nrows; ++r) {
      if (detail::field_is_zero(a[r][static_cast<std::size_t>(col)])) continue;
      if (!best || detail::pivot_cost(a[r][static_cast<std::size_t>(col)]) <
                       detail::pivot_cost(a[*best][static_cast<std::size_t>(col)]))
        best = r;
    }
    if (!best) continue;
    std::swap(a[row], a[*best]);
    const F inv = F(1) / a[row][static_cast<std::size_t>(col)];
    for (auto& v : a[row]) v = v * inv;
    for (std::size_t r = 0; r < nrows; ++r) {
      if (r == row) continue;
      const F factor = a[r][static_cast<std::size_t>(col)];
      if (detail::field_is_zero(factor)) continue;
      for (std::size_t c = 0; c < a[r].size(); ++c)
        if (!detail::field_is_zero(a[row][c])) a[r][c] = a[r][c] - factor * a[row][c];
    }
    e.pivot_columns.push_back(col);
    ++row;
  }
  a.resize(row);
  e.rows = std::move(a);
  return e;
}

template <class F>
int rank(const Matrix<F>& a) {
  return row_reduce(a).rank();
}

/// One solution of A x = b (free variables set to zero), or nullopt if inconsistent.
template <class F>
std::optional<std::vector<F>> solve(const Matrix<F>& a, const std::vector<F>& b) {
  if (a.size() != b.size()) throw MathError("linear system dimension mismatch");
  const std::size_t ncols = a.empty() ? 0 : a[0].size();
  Matrix<F> aug;
  aug.reserve(a.size());
  for (std::size_t r = 0; r < a.size(); ++r) {
    if (a[r].size() != ncols) throw MathError("ragged matrix");
    aug.push_back(a[r]);
    aug.back().push_back(b[r]);
  }
  Echelon<F> e = row_reduce(std::move(aug), static_cast<int>(ncols));
  // Any zero row of A with nonzero right-hand side makes the system inconsistent.
  Matrix<F> check;
  for (std::size_t r = 0; r < a.size(); ++r) {
    check.push_back(a[r]);
    check.back().push_back(b[r]);
  }
  std::vector<F> x(ncols, F(0));
  for (std::size_t r = 0; r < e.rows.size(); ++r) x[static_cast<std::size_t>(e.pivot_columns[r])] = e.rows[r][ncols];
  for (const auto& row : check) {
    F acc(0);
    for (std::size_t c = 0; c < ncols; ++c)
      if (!detail::field_is_zero(row[c])) acc = acc + row[c] * x[c];
    if (!detail::field_is_zero(acc - row[ncols])) return std::nullopt;
  }
  return x;
}

template <class F>
std::optional<Matrix<F>> inverse(const Matrix<F>& a) {
  const std::size_t n = a.size();
  Matrix<F> aug;
  for (std::size_t r = 0; r < n; ++r) {
    if (a[r].size() != n) throw MathError("matrix is not square");
    aug.push_back(a[r]);
    for (std::size_t c = 0; c < n; ++c) aug.back().push_back(F(r == c ? 1 : 0));
  }
  Echelon<F> e = row_reduce(std::move(aug), static_cast<int>(n));
  if (e.rank() != static_cast<int>(n)) return std::nullopt;
  Matrix<F> inv(n, std::vector<F>(n, F(0)));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv[r][c] = e.rows[r][n + c];
  return inv;
}

template <class F>
F determinant(Matrix<F> a) {
  const std::size_t n = a.size();
  F det(1);
  for (std::size_t col = 0; col < n; ++col) {
    if (a[col].size() != n) throw MathError("matrix is not square");
    std::optional<std::size_t> best;
    for (std::size_t r = col; r < n; ++r) {
      if (detail::field_is_zero(a[r][col])) continue;
      if (!best || detail::pivot_cost(a[r][col]) < detail::pivot_cost(a[*best][col])) best = r;
    }
    if (!best) return F(0);
    if (*best != col) {
      std::swap(a[col], a[*best]);
      det = F(0) - det;
    }
    det = det * a[col][col];
    const F inv = F(1) / a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const F factor = a[r][col] * inv;
      if (detail::field_is_zero(factor)) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] = a[r][c] - factor * a[col][c];
    }
  }
  return det;
}

template <class F>
Matrix<F> multiply(const Matrix<F>& a, const Matrix<F>& b) {
  const std::size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
  Matrix<F> out(n, std::vector<F>(m, F(0)));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != k) throw MathError("matrix dimension mismatch");
    for (std::size_t l = 0; l < k; ++l) {
      if (detail::field_is_zero(a[i][l])) continue;
      for (std::size_t j = 0; j < m; ++j) out[i][j] = out[i][j] + a[i][l] * b[l][j];
    }
  }
  return out;
}

template <class F>
Matrix<F> identity_matrix(std::size_t n) {
  Matrix<F> out(n, std::vector<F>(n, F(0)));
  for (std::size_t i = 0; i < n; ++i) out[i][i] = F(1);
  return out;
}

}  // namespace modcls
