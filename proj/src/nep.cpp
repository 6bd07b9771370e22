// SPDX-License-Identifier: Apache-2.0

#include "mepnl/nep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SparseLU>

#include "mepnl/linalg.hpp"

namespace mepnl
{

namespace
{

double frobenius(const SparseMatrix &a)
{
  double s = 0.0;
  for (Eigen::Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it)
      s += std::norm(it.value());
  return std::sqrt(s);
}

}  // namespace

struct ShiftedFactorization::Sparse
{
  Eigen::SparseLU<Eigen::SparseMatrix<Complex>, Eigen::COLAMDOrdering<int>> lu;
};

bool ShiftedFactorization::prefers_dense(const SparseMatrix &matrix)
{
  const double n = static_cast<double>(matrix.rows());
  return matrix.rows() < 500 || static_cast<double>(matrix.nonZeros()) > 0.1 * n * n;
}

ShiftedFactorization::ShiftedFactorization(const SparseMatrix &matrix)
{
  if (prefers_dense(matrix))
  {
    dense_ = std::make_unique<Eigen::PartialPivLU<CMatrix>>(CMatrix(matrix));
  }
  else
  {
    sparse_ = std::make_unique<Sparse>();
    Eigen::SparseMatrix<Complex> col(matrix);
    col.makeCompressed();
    sparse_->lu.compute(col);
    if (sparse_->lu.info() != Eigen::Success)
    {
      growth_ = std::numeric_limits<double>::infinity();
      return;
    }
  }
  const CVector r = linalg::seeded_complex_vector(matrix.rows(), 0xfac7ULL);
  const CVector s = solve(r);
  growth_ = s.allFinite() ? frobenius(matrix) * s.norm() / r.norm()
                          : std::numeric_limits<double>::infinity();
}

ShiftedFactorization::~ShiftedFactorization() = default;

CVector ShiftedFactorization::solve(const CVector &rhs) const
{
  if (dense_)
    return dense_->solve(rhs);
  if (sparse_->lu.info() != Eigen::Success)
    return CVector::Constant(rhs.size(), std::numeric_limits<double>::quiet_NaN());
  return sparse_->lu.solve(rhs);
}

CVector ShiftedFactorization::solve_adjoint(const CVector &rhs) const
{
  if (dense_)
    return dense_->adjoint().solve(rhs);
  if (sparse_->lu.info() != Eigen::Success)
    return CVector::Constant(rhs.size(), std::numeric_limits<double>::quiet_NaN());
  return sparse_->lu.adjoint().solve(rhs);
}

NepView::NepView(const TwoParProblem &problem, Complex reference_lambda, int branch_id)
  : problem_(&problem), state_(problem, reference_lambda), branch_id_(branch_id)
{
  state_.last_point(branch_id);
}

BranchPoint NepView::branch_at(Complex lambda)
{
  return continue_branch(*problem_, state_, branch_id_, lambda);
}

NepMatrix NepView::eval_M(Complex lambda)
{
  BranchPoint bp = branch_at(lambda);
  return NepMatrix{problem_, lambda, bp.mu, std::move(bp.y)};
}

const ShiftedFactorization &NepView::factorization_at(Complex sigma, bool strict)
{
  ++clock_;
  auto it = std::find_if(cache_.begin(), cache_.end(),
                         [&](const Entry &e) { return e.sigma == sigma; });
  if (it != cache_.end())
  {
    ++hits_;
    it->stamp = clock_;
  }
  else
  {
    const Complex mu = branch_at(sigma).mu;
    auto fact = std::make_shared<const ShiftedFactorization>(problem_->a_matrix(sigma, mu));
    ++factorizations_;
    if (cache_.size() >= kCacheSize)
      cache_.erase(std::min_element(cache_.begin(), cache_.end(),
                                    [](const Entry &a, const Entry &b) {
                                      return a.stamp < b.stamp;
                                    }));
    cache_.push_back(Entry{sigma, std::move(fact), clock_});
    it = cache_.end() - 1;
  }
  const auto &f = *it->factorization;
  if (strict && !(f.growth() <= kSingularGrowth))
    throw Error(ErrorKind::ShiftIsEigenvalue,
                "M(sigma) is numerically singular at sigma = " + std::to_string(sigma.real()) +
                    (sigma.imag() < 0 ? "" : "+") + std::to_string(sigma.imag()) + "i");
  return f;
}

CVector NepView::solve_shifted(Complex sigma, const CVector &rhs)
{
  return factorization_at(sigma, true).solve(rhs);
}

CVector NepView::solve_shifted_adjoint(Complex sigma, const CVector &rhs)
{
  return factorization_at(sigma, true).solve_adjoint(rhs);
}

CVector NepView::solve_unchecked(Complex sigma, const CVector &rhs)
{
  CVector x = factorization_at(sigma, false).solve(rhs);
  if (!x.allFinite())
    throw Error(ErrorKind::ShiftIsEigenvalue, "factorization of M(lambda) broke down");
  return x;
}

CVector NepView::derivative_sum_apply(Complex sigma, std::span<const CVector> xs)
{
  if (xs.empty())
    return CVector::Zero(problem_->n());
  const BranchPoint bp = branch_at(sigma);
  const BranchDerivatives d = derivatives(*problem_, bp, static_cast<int>(xs.size()));
  CVector x3 = CVector::Zero(problem_->n());
  for (std::size_t j = 0; j < xs.size(); ++j)
  {
    if (xs[j].size() != problem_->n())
      throw Error(ErrorKind::DimensionMismatch, "derivative_sum_apply: vector size mismatch");
    x3 += d.g[j] * xs[j];
  }
  const CVector sum = problem_->a(2) * xs[0] + problem_->a(3) * x3;
  return solve_shifted(sigma, sum);
}

CVector NepView::left_vector(Complex lambda)
{
  return left_null_vector(*problem_, lambda, branch_at(lambda).mu);
}

CVector left_null_vector(const TwoParProblem &problem, Complex lambda, Complex mu)
{
  const SparseMatrix a = problem.a_matrix(lambda, mu);
  const SparseMatrix ah = a.adjoint();
  const double scale = frobenius(a);
  ShiftedFactorization f(a);
  CVector v = linalg::seeded_complex_vector(problem.n(), 0x1e57ULL).normalized();
  for (int it = 0; it < 50; ++it)
  {
    CVector next = f.solve_adjoint(v);
    if (!next.allFinite())
      throw Error(ErrorKind::NoConvergence, "left vector: factorization of M(lambda) broke down");
    v = next.normalized();
    if ((ah * v).norm() <= 1e-8 * scale)
      return v;
  }
  throw Error(ErrorKind::NoConvergence,
              "left vector: inverse iteration did not reach ||M^H v|| <= 1e-8 ||M|| in 50 "
              "steps; lambda is not an eigenvalue");
}

void attach_left_vectors(const TwoParProblem &problem, Quadruplet &q)
{
  BranchPoint bp;
  bp.lambda = q.lambda;
  bp.mu = q.mu;
  bp.y = q.y;
  attach_left(problem, bp);
  q.w = std::move(bp.w);
  q.v = left_null_vector(problem, q.lambda, q.mu);
}

}  // namespace mepnl
