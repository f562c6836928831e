#pragma once

#include <iosfwd>
#include <string>

#include "takagi/matrix.hpp"

namespace takagi {

// Plain-text matrix format: a header line holding n, then n*n lines
// "re im" in row-major order. Blank lines and lines starting with '#'
// are skipped on input.

CMatrix read_matrix(std::istream& in);
CMatrix read_matrix_file(const std::string& path);

/// Writes with 17 significant digits so values round-trip exactly.
void write_matrix(std::ostream& out, const CMatrix& a);
void write_matrix_file(const std::string& path, const CMatrix& a);

}  // namespace takagi
