#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lospace/bigint.hpp"

namespace lospace {

struct Entry {
  std::size_t row;
  std::size_t col;
  std::int64_t value;
};

// Coordinate storage sorted by (row, col), at most one entry per position.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Entry> entries);

  static SparseMatrix identity(std::size_t n);
  static SparseMatrix from_dense(const std::vector<std::vector<std::int64_t>>& dense);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }
  // Largest |entry|, at least 1.
  std::int64_t entry_bound() const { return bound_; }

  // Index range [first, last) of the entries in a row (binary search, no index kept).
  std::pair<std::size_t, std::size_t> row_range(std::size_t row) const;

  std::vector<std::vector<std::int64_t>> dense() const;
  bool is_symmetric() const;
  SparseMatrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Entry> entries_;
  std::int64_t bound_ = 1;
};

}  // namespace lospace
