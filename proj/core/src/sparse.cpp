#include "lospace/sparse.hpp"

#include <algorithm>

#include "lospace/error.hpp"

namespace lospace {

namespace {
constexpr std::int64_t kEntryLimit = std::int64_t{1} << 62;
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Entry> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const Entry& e = entries_[k];
    if (e.row >= rows_ || e.col >= cols_) throw Error(Errc::dimension_mismatch, "entry index out of range");
    if (k > 0 && entries_[k - 1].row == e.row && entries_[k - 1].col == e.col) {
      throw Error(Errc::invalid_argument, "duplicate entry position");
    }
    if (e.value >= kEntryLimit || e.value <= -kEntryLimit) throw Error(Errc::invalid_argument, "entry exceeds 2^62");
    bound_ = std::max(bound_, e.value < 0 ? -e.value : e.value);
  }
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < n; ++i) entries.push_back({i, i, 1});
  return SparseMatrix(n, n, std::move(entries));
}

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<std::int64_t>>& dense) {
  std::size_t rows = dense.size();
  std::size_t cols = rows ? dense[0].size() : 0;
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < rows; ++i) {
    if (dense[i].size() != cols) throw Error(Errc::dimension_mismatch, "ragged dense matrix");
    for (std::size_t j = 0; j < cols; ++j) {
      if (dense[i][j] != 0) entries.push_back({i, j, dense[i][j]});
    }
  }
  return SparseMatrix(rows, cols, std::move(entries));
}

std::pair<std::size_t, std::size_t> SparseMatrix::row_range(std::size_t row) const {
  auto first = std::lower_bound(entries_.begin(), entries_.end(), row,
                                [](const Entry& e, std::size_t r) { return e.row < r; });
  auto last = std::upper_bound(first, entries_.end(), row,
                               [](std::size_t r, const Entry& e) { return r < e.row; });
  return {static_cast<std::size_t>(first - entries_.begin()), static_cast<std::size_t>(last - entries_.begin())};
}

std::vector<std::vector<std::int64_t>> SparseMatrix::dense() const {
  std::vector<std::vector<std::int64_t>> out(rows_, std::vector<std::int64_t>(cols_, 0));
  for (const Entry& e : entries_) out[e.row][e.col] = e.value;
  return out;
}

bool SparseMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  SparseMatrix t = transposed();
  if (t.entries_.size() != entries_.size()) return false;
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const Entry& a = entries_[k];
    const Entry& b = t.entries_[k];
    if (a.row != b.row || a.col != b.col || a.value != b.value) return false;
  }
  return true;
}

SparseMatrix SparseMatrix::transposed() const {
  std::vector<Entry> entries;
  entries.reserve(entries_.size());
  for (const Entry& e : entries_) entries.push_back({e.col, e.row, e.value});
  return SparseMatrix(cols_, rows_, std::move(entries));
}

}  // namespace lospace
