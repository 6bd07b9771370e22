// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string>

#include "mepnl/types.hpp"

namespace mepnl
{

/// Linear two-parameter eigenvalue problem
///
///   (A1 + lambda A2 + mu A3) x = 0,   x in C^n,
///   (B1 + lambda B2 + mu B3) y = 0,   y in C^m,
///
/// together with the normalization functional c (c^T y = 1) that pins down the
/// eigenvector of the B equation. Instances are immutable once constructed.
class TwoParProblem
{
public:
  TwoParProblem(std::array<SparseMatrix, 3> a, std::array<CMatrix, 3> b, CVector c,
                std::string label = {});

  Eigen::Index n() const { return a_[0].rows(); }
  Eigen::Index m() const { return b_[0].rows(); }

  // Coefficients are indexed as in the equations above, k = 1, 2, 3.
  const SparseMatrix &a(int k) const { return a_.at(k - 1); }
  const CMatrix &b(int k) const { return b_.at(k - 1); }
  const CVector &c() const { return c_; }
  const std::string &label() const { return label_; }

  // Frobenius norms, cached at construction.
  double a_norm(int k) const { return a_norms_.at(k - 1); }
  double b_norm(int k) const { return b_norms_.at(k - 1); }

  // A(lambda, mu) x and the assembled matrices A(lambda, mu), B(lambda, mu).
  CVector apply_a(Complex lambda, Complex mu, const CVector &x) const;
  SparseMatrix a_matrix(Complex lambda, Complex mu) const;
  CMatrix b_matrix(Complex lambda, Complex mu) const;

private:
  std::array<SparseMatrix, 3> a_;
  std::array<CMatrix, 3> b_;
  CVector c_;
  std::string label_;
  std::array<double, 3> a_norms_{};
  std::array<double, 3> b_norms_{};
};

/// Relative residuals of both equations (Frobenius norms for the coefficients).
struct ResidualRecord
{
  double res_a = 0.0;
  double res_b = 0.0;
};

struct Quadruplet
{
  Complex lambda{};
  Complex mu{};
  CVector x;
  CVector y;
  // Left eigenvectors of M(lambda) and of the B pencil at (lambda, mu).
  std::optional<CVector> v;
  std::optional<CVector> w;
  ResidualRecord residuals;
  // False when c^T y vanished and y was stored with unit 2-norm instead.
  bool c_normalized = true;
};

ResidualRecord residuals(const TwoParProblem &problem, const Quadruplet &q);

// Scales y so that c^T y = 1, or to unit norm when c^T y is negligible.
// Returns whether the c-normalization was applied.
bool normalize_by_c(const CVector &c, CVector &y);

Eigen::Matrix2cd c0_matrix(const TwoParProblem &problem, const Quadruplet &q);

struct ConditionWeights
{
  std::array<double, 3> alpha{1.0, 1.0, 1.0};
  std::array<double, 3> beta{1.0, 1.0, 1.0};
  double gamma = 1.0;

  static ConditionWeights absolute();
  // alpha_j = ||A_j||, beta_j = ||B_j||, gamma = |lambda|.
  static ConditionWeights relative(const TwoParProblem &problem, Complex lambda);
};

struct ConditionReport
{
  double kappa_a = 0.0;
  double kappa_g_b = 0.0;
  double kappa_g_lambda = 0.0;
  double kappa_total = 0.0;
  Complex det_c0{};
  // First-order |d lambda| per unit backward error in B1, B3 (beta2 = 0).
  double backward_lambda_bound = 0.0;
  // The two customary choices of the second theta component.
  double theta2_absolute = 0.0;
  double theta2_relative = 0.0;
  Complex g_prime{};
  Complex vh_mprime_x{};
  Complex vh_a3_x{};
  Complex wh_b3_y{};
  ConditionWeights weights;
};

ConditionReport condition_numbers(const TwoParProblem &problem, const Quadruplet &q,
                                  const ConditionWeights &weights);

}  // namespace mepnl
