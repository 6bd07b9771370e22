// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace mepnl
{

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
// Large A-side coefficients are stored in compressed row form.
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

enum class ErrorKind
{
  DimensionMismatch,
  InvalidArgument,
  MissingLeftVectors,
  NonSimple,
  AmbiguousBranch,
  SingularJacobian,
  ShiftIsEigenvalue,
  NoConvergence,
  DegenerateProjection,
  SingularProblem,
  TooLarge,
  Io,
  Parse,
};

const char *to_string(ErrorKind kind);

class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string &what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
  {
  }

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

// Raised by branch continuation when two pencil eigenvalues are equally good
// continuations of the tracked branch (near a double eigenvalue).
class AmbiguousBranchError : public Error
{
public:
  AmbiguousBranchError(Complex lambda, Complex first, Complex second, const std::string &what)
    : Error(ErrorKind::AmbiguousBranch, what), lambda_(lambda), first_(first), second_(second)
  {
  }

  Complex lambda() const { return lambda_; }
  Complex first() const { return first_; }
  Complex second() const { return second_; }

private:
  Complex lambda_, first_, second_;
};

}  // namespace mepnl
