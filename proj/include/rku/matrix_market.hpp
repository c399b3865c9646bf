#pragma once

#include <iosfwd>
#include <string>

#include "rku/types.hpp"

namespace rku {

/// Reads a Matrix Market file (array or coordinate; real, integer or complex;
/// general, symmetric, hermitian or skew-symmetric).
Matrix read_matrix_market(std::istream& in);
Matrix read_matrix_market_file(const std::string& path);

/// Writes a dense complex array file with 17 significant digits.
void write_matrix_market(std::ostream& out, const Matrix& a);
void write_matrix_market_file(const std::string& path, const Matrix& a);

}  // namespace rku
