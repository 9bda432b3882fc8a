#pragma once
#include <iosfwd>
#include <string>
#include <vector>

#include "bbols/block_matrix.hpp"

// Plain-text interchange for matrices and vectors: a header line
// "m n d" followed by the m*n entries in row-major order, whitespace
// separated. A vector is stored as a single-column matrix (n = 1,
// d = 1). Writers emit %.17g so values survive a round trip exactly.

namespace bbols::io {

BlockMatrix read_matrix(std::istream& in, const std::string& origin);
BlockMatrix read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const BlockMatrix& D);
void write_matrix_file(const std::string& path, const BlockMatrix& D);

std::vector<double> read_vector_file(const std::string& path);
void write_vector_file(const std::string& path,
                       const std::vector<double>& v);

}  // namespace bbols::io
