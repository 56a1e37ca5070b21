#pragma once

#include <span>
#include <vector>

namespace stochcuts {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;

  bool operator==(const Triplet&) const = default;
};

// Row-major sparse matrix kept in canonical form: entries sorted by
// (row, col), duplicates summed, exact zeros dropped.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {}

  // Builds a canonical matrix. `duplicates`, when given, receives the number
  // of (row, col) pairs that appeared more than once and were summed.
  // Throws std::out_of_range on an index outside the declared shape.
  static SparseMatrix FromTriplets(int rows, int cols,
                                   std::vector<Triplet> triplets,
                                   int* duplicates = nullptr);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<Triplet>& entries() const { return entries_; }

  // Entries of row r as a contiguous span.
  std::span<const Triplet> Row(int r) const;

  double At(int r, int c) const;

  // A * x.
  std::vector<double> Multiply(std::span<const double> x) const;
  // A^T * y.
  std::vector<double> TransposeMultiply(std::span<const double> y) const;
  double RowDot(int r, std::span<const double> x) const;

  bool operator==(const SparseMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ &&
           entries_ == other.entries_;
  }

 private:
  void BuildRowIndex();

  int rows_ = 0;
  int cols_ = 0;
  std::vector<Triplet> entries_;
  std::vector<int> row_start_;
};

}  // namespace stochcuts
