// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>

#include "mepnl/types.hpp"

namespace mepnl
{

// Reads coordinate or array Matrix Market data (real, integer or complex;
// general, symmetric, skew-symmetric or hermitian). Explicitly stored zeros
// are kept in the sparsity pattern. Errors carry the source name and line.
SparseMatrix parse_matrix_market(std::istream &in, const std::string &source = "<stream>");
SparseMatrix read_matrix_market(const std::string &path);

// A vector stored as an n x 1 (or 1 x n) matrix in either format.
CVector read_vector_market(const std::string &path);

// Coordinate complex general, 17 significant digits.
void write_matrix_market(std::ostream &out, const SparseMatrix &matrix);
void write_matrix_market(const std::string &path, const SparseMatrix &matrix);
// Array complex general.
void write_matrix_market(const std::string &path, const CMatrix &matrix);

}  // namespace mepnl
