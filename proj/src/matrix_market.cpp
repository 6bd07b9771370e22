// SPDX-License-Identifier: Apache-2.0

#include "mepnl/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

namespace mepnl
{

namespace
{

std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

[[noreturn]] void fail(const std::string &source, std::size_t line, const std::string &what)
{
  throw Error(ErrorKind::Parse, source + ":" + std::to_string(line) + ": " + what);
}

struct Reader
{
  std::istream &in;
  const std::string &source;
  std::size_t line = 0;

  // Next line that is neither blank nor a comment.
  bool next(std::string &out)
  {
    while (std::getline(in, out))
    {
      ++line;
      const auto first = out.find_first_not_of(" \t\r");
      if (first == std::string::npos || out[first] == '%')
        continue;
      return true;
    }
    return false;
  }
};

}  // namespace

SparseMatrix parse_matrix_market(std::istream &in, const std::string &source)
{
  Reader reader{in, source};
  std::string header;
  if (!std::getline(in, header))
    fail(source, 1, "empty input");
  reader.line = 1;
  std::istringstream hs(header);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
    fail(source, 1, "missing '%%MatrixMarket matrix' banner");
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format != "coordinate" && format != "array")
    fail(source, 1, "unknown format '" + format + "'");
  if (field != "real" && field != "integer" && field != "complex" && field != "double")
    fail(source, 1, "unsupported field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric" &&
      symmetry != "hermitian")
    fail(source, 1, "unknown symmetry '" + symmetry + "'");
  const bool complex = field == "complex";
  if (symmetry == "hermitian" && !complex)
    fail(source, 1, "hermitian symmetry requires complex entries");

  std::string text;
  if (!reader.next(text))
    fail(source, reader.line + 1, "missing size line");
  std::istringstream sizes(text);
  long long rows = -1, cols = -1, entries = -1;
  sizes >> rows >> cols;
  if (format == "coordinate")
    sizes >> entries;
  if (!sizes || rows < 0 || cols < 0 || (format == "coordinate" && entries < 0))
    fail(source, reader.line, "malformed size line");
  if (symmetry != "general" && rows != cols)
    fail(source, reader.line, "symmetric storage requires a square matrix");

  auto read_value = [&](std::istringstream &ls) {
    double re = 0.0, im = 0.0;
    ls >> re;
    if (complex)
      ls >> im;
    if (!ls)
      fail(source, reader.line, "malformed entry");
    std::string extra;
    if (ls >> extra)
      fail(source, reader.line, "unexpected trailing data '" + extra + "'");
    return Complex(re, im);
  };

  std::vector<Eigen::Triplet<Complex>> triplets;
  auto add = [&](long long i, long long j, Complex v) {
    triplets.emplace_back(i, j, v);
    if (i == j || symmetry == "general")
      return;
    if (symmetry == "symmetric")
      triplets.emplace_back(j, i, v);
    else if (symmetry == "skew-symmetric")
      triplets.emplace_back(j, i, -v);
    else
      triplets.emplace_back(j, i, std::conj(v));
  };

  if (format == "coordinate")
  {
    triplets.reserve(static_cast<std::size_t>(entries) * (symmetry == "general" ? 1 : 2));
    for (long long e = 0; e < entries; ++e)
    {
      if (!reader.next(text))
        fail(source, reader.line + 1,
             "expected " + std::to_string(entries) + " entries, found " + std::to_string(e));
      std::istringstream ls(text);
      long long i = 0, j = 0;
      ls >> i >> j;
      if (!ls)
        fail(source, reader.line, "malformed index pair");
      if (i < 1 || i > rows || j < 1 || j > cols)
        fail(source, reader.line, "index (" + std::to_string(i) + "," + std::to_string(j) +
                                      ") out of range");
      if (symmetry != "general" && j > i)
        fail(source, reader.line, "entry above the diagonal in symmetric storage");
      if (symmetry == "skew-symmetric" && i == j)
        fail(source, reader.line, "diagonal entry in skew-symmetric storage");
      add(i - 1, j - 1, read_value(ls));
    }
  }
  else
  {
    for (long long j = 0; j < cols; ++j)
    {
      const long long start = symmetry == "general"          ? 0
                              : symmetry == "skew-symmetric" ? j + 1
                                                             : j;
      for (long long i = start; i < rows; ++i)
      {
        if (!reader.next(text))
          fail(source, reader.line + 1, "too few array entries");
        std::istringstream ls(text);
        add(i, j, read_value(ls));
      }
    }
  }
  if (reader.next(text))
    fail(source, reader.line, "unexpected data after the last entry");

  SparseMatrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  out.setFromTriplets(triplets.begin(), triplets.end());
  out.makeCompressed();
  return out;
}

SparseMatrix read_matrix_market(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  return parse_matrix_market(in, path);
}

CVector read_vector_market(const std::string &path)
{
  const SparseMatrix m = read_matrix_market(path);
  if (m.cols() != 1 && m.rows() != 1)
    throw Error(ErrorKind::DimensionMismatch, "'" + path + "' is " + std::to_string(m.rows()) +
                                                  "x" + std::to_string(m.cols()) +
                                                  ", expected a vector");
  const CMatrix dense(m);
  return m.cols() == 1 ? CVector(dense.col(0)) : CVector(dense.row(0).transpose());
}

void write_matrix_market(std::ostream &out, const SparseMatrix &matrix)
{
  out.precision(17);
  out << "%%MatrixMarket matrix coordinate complex general\n";
  out << matrix.rows() << ' ' << matrix.cols() << ' ' << matrix.nonZeros() << '\n';
  for (Eigen::Index r = 0; r < matrix.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(matrix, r); it; ++it)
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value().real() << ' '
          << it.value().imag() << '\n';
}

void write_matrix_market(const std::string &path, const SparseMatrix &matrix)
{
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  write_matrix_market(out, matrix);
  if (!out)
    throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

void write_matrix_market(const std::string &path, const CMatrix &matrix)
{
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  out.precision(17);
  out << "%%MatrixMarket matrix array complex general\n";
  out << matrix.rows() << ' ' << matrix.cols() << '\n';
  for (Eigen::Index j = 0; j < matrix.cols(); ++j)
    for (Eigen::Index i = 0; i < matrix.rows(); ++i)
      out << matrix(i, j).real() << ' ' << matrix(i, j).imag() << '\n';
  if (!out)
    throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

}  // namespace mepnl
