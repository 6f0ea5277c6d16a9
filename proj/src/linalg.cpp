#include "nullcode/linalg.hpp"

#include "nullcode/error.hpp"

namespace nullcode {

Echelon row_reduce(const FieldCtx& f, Mat m, std::size_t cols) {
  Echelon e;
  e.cols = cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t piv = r;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[r], m[piv]);
    const Elem s = f.inv(m[r][c]);
    for (auto& x : m[r]) x = f.mul(x, s);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Elem factor = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] ^= f.mul(factor, m[r][j]);
    }
    e.pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  e.rows = std::move(m);
  return e;
}

std::size_t rank(const FieldCtx& f, const Mat& m, std::size_t cols) {
  return row_reduce(f, m, cols).rank();
}

Vec reduce(const FieldCtx& f, const Echelon& e, Vec v) {
  if (v.size() != e.cols) throw Error(Errc::LengthMismatch, "vector length does not match matrix width");
  for (std::size_t i = 0; i < e.rows.size(); ++i) {
    const Elem c = v[e.pivots[i]];
    if (c == 0) continue;
    for (std::size_t j = e.pivots[i]; j < e.cols; ++j) v[j] ^= f.mul(c, e.rows[i][j]);
  }
  return v;
}

bool in_row_space(const FieldCtx& f, const Echelon& e, const Vec& v) {
  for (Elem x : reduce(f, e, v)) {
    if (x != 0) return false;
  }
  return true;
}

Mat null_space(const FieldCtx& f, const Mat& m, std::size_t cols) {
  const Echelon e = row_reduce(f, m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t p : e.pivots) is_pivot[p] = true;
  Mat basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    Vec x(cols, 0);
    x[free] = 1;
    // Row i reads x[pivot_i] + sum_j row[j] x[j] = 0; char 2 so minus is plus.
    for (std::size_t i = 0; i < e.rows.size(); ++i) x[e.pivots[i]] = e.rows[i][free];
    basis.push_back(std::move(x));
  }
  return basis;
}

std::optional<Vec> solve(const FieldCtx& f, const Mat& a, const Vec& b, std::size_t cols) {
  if (a.size() != b.size()) throw Error(Errc::LengthMismatch, "right-hand side length mismatch");
  Mat aug = a;
  for (std::size_t i = 0; i < aug.size(); ++i) {
    if (aug[i].size() != cols) throw Error(Errc::LengthMismatch, "ragged matrix");
    aug[i].push_back(b[i]);
  }
  const Echelon e = row_reduce(f, std::move(aug), cols + 1);
  Vec x(cols, 0);
  for (std::size_t i = 0; i < e.rows.size(); ++i) {
    if (e.pivots[i] == cols) return std::nullopt;
    x[e.pivots[i]] = e.rows[i][cols];
  }
  return x;
}

Elem dot(const FieldCtx& f, const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw Error(Errc::LengthMismatch, "dot product of unequal lengths");
  Elem acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc ^= f.mul(a[i], b[i]);
  return acc;
}

bool same_row_space(const FieldCtx& f, const Mat& a, const Mat& b, std::size_t cols) {
  return row_reduce(f, a, cols).rows == row_reduce(f, b, cols).rows;
}

}  // namespace nullcode
