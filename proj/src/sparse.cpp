#include "stochcuts/sparse.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace stochcuts {

SparseMatrix SparseMatrix::FromTriplets(int rows, int cols,
                                        std::vector<Triplet> triplets,
                                        int* duplicates) {
  if (rows < 0 || cols < 0) throw std::out_of_range("negative matrix shape");
  for (const Triplet& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw std::out_of_range("triplet (" + std::to_string(t.row) + ", " +
                              std::to_string(t.col) + ") outside " +
                              std::to_string(rows) + "x" +
                              std::to_string(cols));
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });
  SparseMatrix m(rows, cols);
  int dup = 0;
  for (const Triplet& t : triplets) {
    if (!m.entries_.empty() && m.entries_.back().row == t.row &&
        m.entries_.back().col == t.col) {
      m.entries_.back().value += t.value;
      ++dup;
    } else {
      m.entries_.push_back(t);
    }
  }
  std::erase_if(m.entries_, [](const Triplet& t) { return t.value == 0.0; });
  m.BuildRowIndex();
  if (duplicates != nullptr) *duplicates = dup;
  return m;
}

void SparseMatrix::BuildRowIndex() {
  row_start_.assign(rows_ + 1, 0);
  for (const Triplet& t : entries_) ++row_start_[t.row + 1];
  for (int r = 0; r < rows_; ++r) row_start_[r + 1] += row_start_[r];
}

std::span<const Triplet> SparseMatrix::Row(int r) const {
  if (row_start_.empty()) return {};
  return std::span<const Triplet>(entries_.data() + row_start_[r],
                                  entries_.data() + row_start_[r + 1]);
}

double SparseMatrix::At(int r, int c) const {
  for (const Triplet& t : Row(r)) {
    if (t.col == c) return t.value;
  }
  return 0.0;
}

std::vector<double> SparseMatrix::Multiply(std::span<const double> x) const {
  std::vector<double> out(rows_, 0.0);
  for (const Triplet& t : entries_) out[t.row] += t.value * x[t.col];
  return out;
}

std::vector<double> SparseMatrix::TransposeMultiply(
    std::span<const double> y) const {
  std::vector<double> out(cols_, 0.0);
  for (const Triplet& t : entries_) out[t.col] += t.value * y[t.row];
  return out;
}

double SparseMatrix::RowDot(int r, std::span<const double> x) const {
  double sum = 0.0;
  for (const Triplet& t : Row(r)) sum += t.value * x[t.col];
  return sum;
}

}  // namespace stochcuts
