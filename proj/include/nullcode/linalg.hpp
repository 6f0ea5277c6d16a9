#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nullcode/gf.hpp"

namespace nullcode {

using Vec = std::vector<Elem>;
using Mat = std::vector<Vec>;

// Reduced row echelon form with zero rows dropped.
struct Echelon {
  Mat rows;
  std::vector<std::size_t> pivots;  // pivot column of each row
  std::size_t cols = 0;

  std::size_t rank() const { return rows.size(); }
};

Echelon row_reduce(const FieldCtx& f, Mat m, std::size_t cols);
std::size_t rank(const FieldCtx& f, const Mat& m, std::size_t cols);

// Reduces v against the echelon rows; the remainder is zero iff v lies in
// their span.
Vec reduce(const FieldCtx& f, const Echelon& e, Vec v);
bool in_row_space(const FieldCtx& f, const Echelon& e, const Vec& v);

// Basis of {x : m x^T = 0}.
Mat null_space(const FieldCtx& f, const Mat& m, std::size_t cols);

// Some solution of A x = b, or nullopt when inconsistent. Free variables are 0.
std::optional<Vec> solve(const FieldCtx& f, const Mat& a, const Vec& b, std::size_t cols);

Elem dot(const FieldCtx& f, const Vec& a, const Vec& b);

bool same_row_space(const FieldCtx& f, const Mat& a, const Mat& b, std::size_t cols);

}  // namespace nullcode
