// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mepnl/core.hpp"

namespace mepnl
{

inline constexpr double kTolPencil = 1e-10;
inline constexpr double kTolInfinite = 1e-10;
inline constexpr double kTolSingularJ = 1e-12;

/// One finite eigenpair of the lambda-parametrized pencil
/// -(B1 + lambda B2) y = mu B3 y, i.e. a point mu = g_i(lambda) on branch i.
struct BranchPoint
{
  Complex lambda{};
  Complex mu{};
  CVector y;  // c^T y = 1 unless c_degenerate
  CVector w;  // left eigenvector (unit norm); empty when not computed
  int branch_id = -1;
  bool finite = true;
  bool c_degenerate = false;
};

struct InfiniteEigenvalue
{
  Complex alpha{};
  Complex beta{};
  CVector y;
};

struct PencilSpectrum
{
  // Sorted by |mu| ascending; branch_id is the position in this list.
  std::vector<BranchPoint> branches;
  std::vector<InfiniteEigenvalue> infinite;
};

PencilSpectrum eigenpairs_at(const TwoParProblem &problem, Complex lambda, bool want_left = true);

// Fills bp.w from the null space of B(lambda, mu)^H.
void attach_left(const TwoParProblem &problem, BranchPoint &bp);

// Relative residual of the B equation at a branch point.
double pencil_residual(const TwoParProblem &problem, const BranchPoint &bp);

// Seeded complex normalization vector; reseeded until no eigenvector of the
// pencil at reference_lambda is (numerically) orthogonal to it.
CVector default_normalization(const std::array<CMatrix, 3> &b, Complex reference_lambda = 0.0,
                              std::uint64_t seed = 1);

/// Branch table at a reference point plus the last tracked point per branch.
class BranchState
{
public:
  BranchState(const TwoParProblem &problem, Complex reference_lambda);

  Complex reference_lambda() const { return reference_lambda_; }
  int branch_count() const { return static_cast<int>(reference_.size()); }
  const std::vector<BranchPoint> &reference_table() const { return reference_; }
  const BranchPoint &last_point(int branch_id) const;

private:
  friend BranchPoint continue_branch(const TwoParProblem &, BranchState &, int, Complex);

  Complex reference_lambda_;
  std::vector<BranchPoint> reference_;
  std::vector<BranchPoint> last_;
  std::vector<std::optional<Complex>> slope_;
};

// Moves branch_id to lambda_new, choosing the eigenvalue nearest to the
// first-order Taylor prediction. Steps are bisected while the choice is not
// clear-cut. Throws AmbiguousBranchError near double eigenvalues.
BranchPoint continue_branch(const TwoParProblem &problem, BranchState &state, int branch_id,
                            Complex lambda_new);

/// J = [[B(lambda, mu), B3 y], [c^T, 0]], the partial Jacobian of the
/// implicit-function system with respect to (y, mu).
class JacobianJ
{
public:
  JacobianJ(CMatrix matrix);

  const CMatrix &matrix() const { return matrix_; }
  double sigma_min() const { return extremes_.min; }
  double norm() const { return extremes_.max; }
  double relative_sigma_min() const { return extremes_.ratio(); }
  bool singular(double tol = kTolSingularJ) const { return relative_sigma_min() <= tol; }
  CVector solve(const CVector &rhs) const { return lu_.solve(rhs); }

private:
  CMatrix matrix_;
  Eigen::PartialPivLU<CMatrix> lu_;
  struct
  {
    double max = 0.0, min = 0.0;
    double ratio() const { return max == 0.0 ? 0.0 : min / max; }
  } extremes_;
};

JacobianJ jacobian(const TwoParProblem &problem, const BranchPoint &bp);

struct BranchDerivatives
{
  std::vector<Complex> g;  // g[k-1] = g^{(k)}(lambda)
  std::vector<CVector> y;  // y[k-1] = y^{(k)}(lambda)
};

// Derivatives of order 1..k of (g_i, y_i) from one factorization of J.
BranchDerivatives derivatives(const TwoParProblem &problem, const BranchPoint &bp, int k);

// g'(lambda) = -(w^H B2 y) / (w^H B3 y); requires bp.w.
Complex first_derivative_closed_form(const TwoParProblem &problem, const BranchPoint &bp);

struct Singularity
{
  enum class Kind
  {
    DoubleEigenvalue,
    Pole,
  };
  Complex lambda{};
  Kind kind = Kind::DoubleEigenvalue;
  // Relative gap (double eigenvalue) or relative 1/|mu| (pole) at lambda.
  double measure = 0.0;
};

struct RadiusScan
{
  double radius = 0.0;  // +inf when nothing was flagged
  std::vector<Singularity> singularities;
};

// Locates double eigenvalues and poles of the pencil spectrum near the sample
// points: local extrema of the pairwise gap / of |mu| seed a secant iteration
// on (mu_a - mu_b)^2 resp. 1/mu. Locations whose relative gap (or 1/|mu|)
// falls below 1e-6 are reported.
RadiusScan convergence_radius_scan(const TwoParProblem &problem, int branch_id, Complex center,
                                   std::span<const Complex> grid);

}  // namespace mepnl
