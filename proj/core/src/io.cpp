#include "lospace/io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "lospace/error.hpp"

namespace lospace {

namespace {

// Whitespace-separated tokens with the line each came from; '%' and '#' start comments.
class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  bool next(std::string& token) {
    while (!(line_stream_ >> token)) {
      std::string line;
      if (!std::getline(in_, line)) return false;
      ++line_no_;
      auto cut = line.find_first_of("%#");
      if (cut != std::string::npos) line.erase(cut);
      line_stream_.clear();
      line_stream_.str(line);
    }
    return true;
  }

  std::string require(const char* what) {
    std::string token;
    if (!next(token)) throw ParseError(line_no_ + 1, std::string("unexpected end of input, expected ") + what);
    return token;
  }

  BigInt integer(const char* what) {
    std::string token = require(what);
    auto v = parse_bigint(token);
    if (!v) throw ParseError(line_no_, std::string("expected integer ") + what + ", got '" + token + "'");
    return *v;
  }

  std::size_t count(const char* what) {
    BigInt v = integer(what);
    if (v < 0 || bit_length(v) > 40) throw ParseError(line_no_, std::string(what) + " out of range");
    return static_cast<std::size_t>(to_u64(v));
  }

  std::size_t line() const { return line_no_; }

  void expect_end() {
    std::string token;
    if (next(token)) throw ParseError(line_no_, "unexpected trailing token '" + token + "'");
  }

 private:
  std::istream& in_;
  std::istringstream line_stream_;
  std::size_t line_no_ = 0;
};

std::ifstream open_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  return in;
}

}  // namespace

SparseMatrix read_matrix(std::istream& in) {
  TokenReader reader(in);
  std::size_t rows = reader.count("row count");
  std::size_t cols = reader.count("column count");
  std::size_t nnz = reader.count("nonzero count");
  std::vector<Entry> entries;
  entries.reserve(nnz);
  std::vector<std::size_t> lines;
  lines.reserve(nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    std::size_t i = reader.count("row index");
    std::size_t j = reader.count("column index");
    BigInt v = reader.integer("value");
    std::size_t line = reader.line();
    if (i < 1 || i > rows || j < 1 || j > cols) throw ParseError(line, "index out of range");
    if (bit_length(v) > 62) throw ParseError(line, "entry magnitude reaches 2^62");
    entries.push_back({i - 1, j - 1, static_cast<std::int64_t>(v.get_si())});
    lines.push_back(line);
  }
  reader.expect_end();
  std::vector<std::size_t> order(entries.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const Entry& a = entries[x];
    const Entry& b = entries[y];
    return a.row != b.row ? a.row < b.row : a.col != b.col ? a.col < b.col : lines[x] < lines[y];
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    const Entry& a = entries[order[k - 1]];
    const Entry& b = entries[order[k]];
    if (a.row == b.row && a.col == b.col) throw ParseError(lines[order[k]], "duplicate entry position");
  }
  try {
    return SparseMatrix(rows, cols, std::move(entries));
  } catch (const Error& e) {
    throw ParseError(0, e.what());
  }
}

SparseMatrix read_matrix_file(const std::string& path) {
  auto in = open_file(path);
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const SparseMatrix& a) {
  out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  for (const Entry& e : a.entries()) out << e.row + 1 << ' ' << e.col + 1 << ' ' << e.value << '\n';
}

IntVector read_vector(std::istream& in) {
  TokenReader reader(in);
  std::size_t n = reader.count("length");
  IntVector v;
  v.reserve(n);
  for (std::size_t i = 0; i < n; ++i) v.push_back(reader.integer("entry"));
  reader.expect_end();
  return v;
}

IntVector read_vector_file(const std::string& path) {
  auto in = open_file(path);
  return read_vector(in);
}

void write_vector(std::ostream& out, const IntVector& v) {
  out << v.size() << '\n';
  for (const auto& x : v) out << x.get_str(10) << '\n';
}

}  // namespace lospace
