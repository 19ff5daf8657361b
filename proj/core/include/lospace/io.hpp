#pragma once

#include <iosfwd>
#include <string>

#include "lospace/linop.hpp"
#include "lospace/sparse.hpp"

namespace lospace {

// Matrix text: "rows cols nnz" then nnz lines "i j v", 1-indexed.
SparseMatrix read_matrix(std::istream& in);
SparseMatrix read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const SparseMatrix& a);

// Vector text: "n" then n integers, whitespace separated.
IntVector read_vector(std::istream& in);
IntVector read_vector_file(const std::string& path);
void write_vector(std::ostream& out, const IntVector& v);

}  // namespace lospace
