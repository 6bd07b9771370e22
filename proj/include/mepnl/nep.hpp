// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mepnl/pencil.hpp"

namespace mepnl
{

/// LU factorization of an assembled n x n matrix. Dense partial pivoting is
/// used for small or dense matrices, sparse LU otherwise.
class ShiftedFactorization
{
public:
  explicit ShiftedFactorization(const SparseMatrix &matrix);
  ~ShiftedFactorization();
  ShiftedFactorization(const ShiftedFactorization &) = delete;
  ShiftedFactorization &operator=(const ShiftedFactorization &) = delete;

  CVector solve(const CVector &rhs) const;
  CVector solve_adjoint(const CVector &rhs) const;

  bool is_sparse() const { return sparse_ != nullptr; }
  // ||M||_F ||M^{-1} r|| / ||r|| for a seeded r; a lower bound on cond_F(M).
  double growth() const { return growth_; }

  static bool prefers_dense(const SparseMatrix &matrix);

private:
  struct Sparse;
  std::unique_ptr<Eigen::PartialPivLU<CMatrix>> dense_;
  std::unique_ptr<Sparse> sparse_;
  double growth_ = 0.0;
};

/// M(lambda) = A1 + lambda A2 + g_i(lambda) A3 at one lambda.
struct NepMatrix
{
  const TwoParProblem *problem = nullptr;
  Complex lambda{};
  Complex mu{};
  CVector y;

  CVector apply(const CVector &v) const { return problem->apply_a(lambda, mu, v); }
  SparseMatrix assemble() const { return problem->a_matrix(lambda, mu); }
};

/// The nonlinearized problem on one branch g_i. Owns the branch tracking
/// state and a small LRU cache of shifted factorizations.
class NepView
{
public:
  static constexpr std::size_t kCacheSize = 4;
  // Shifts with growth above this bound are treated as eigenvalues.
  static constexpr double kSingularGrowth = 1e12;

  NepView(const TwoParProblem &problem, Complex reference_lambda, int branch_id);

  const TwoParProblem &problem() const { return *problem_; }
  int branch_id() const { return branch_id_; }
  const BranchState &branch_state() const { return state_; }

  // g_i(lambda) and y_i(lambda), continued from the last evaluation.
  BranchPoint branch_at(Complex lambda);

  NepMatrix eval_M(Complex lambda);

  // M(sigma)^{-1} rhs; throws ShiftIsEigenvalue when M(sigma) is numerically singular.
  CVector solve_shifted(Complex sigma, const CVector &rhs);
  CVector solve_shifted_adjoint(Complex sigma, const CVector &rhs);
  // As solve_shifted, but only fails when the factorization breaks down
  // outright. Inverse-iteration style methods solve with nearly singular M.
  CVector solve_unchecked(Complex sigma, const CVector &rhs);

  // M(sigma)^{-1} (M'(sigma) x_1 + ... + M^{(p)}(sigma) x_p).
  CVector derivative_sum_apply(Complex sigma, std::span<const CVector> xs);

  CVector left_vector(Complex lambda);

  std::size_t factorization_count() const { return factorizations_; }
  std::size_t cache_hits() const { return hits_; }

private:
  struct Entry
  {
    Complex sigma;
    std::shared_ptr<const ShiftedFactorization> factorization;
    std::uint64_t stamp = 0;
  };

  const ShiftedFactorization &factorization_at(Complex sigma, bool strict);

  const TwoParProblem *problem_;
  BranchState state_;
  int branch_id_;
  std::vector<Entry> cache_;
  std::uint64_t clock_ = 0;
  std::size_t factorizations_ = 0;
  std::size_t hits_ = 0;
};

// Left null vector of A(lambda, mu) by inverse iteration on A(lambda, mu)^H,
// converged to ||A^H v|| <= 1e-8 ||A||_F ||v||.
CVector left_null_vector(const TwoParProblem &problem, Complex lambda, Complex mu);

// Computes q.v (NEP left vector) and q.w (pencil left vector for the
// eigenvalue nearest q.mu).
void attach_left_vectors(const TwoParProblem &problem, Quadruplet &q);

}  // namespace mepnl
