// SPDX-License-Identifier: Apache-2.0

#include "mepnl/linalg.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace mepnl::linalg
{

namespace
{

// Left null direction of (P - mu Q): the last left singular vector.
CVector left_null_vector(const CMatrix &p, const CMatrix &q, Complex mu)
{
  const CMatrix s = p - mu * q;
  Eigen::JacobiSVD<CMatrix> svd(s, Eigen::ComputeFullU);
  return svd.matrixU().col(s.rows() - 1);
}

}  // namespace

SingularExtremes singular_extremes(const CMatrix &a)
{
  SingularExtremes e;
  if (a.size() == 0)
    return e;
  Eigen::JacobiSVD<CMatrix> svd(a);
  const auto &s = svd.singularValues();
  e.max = s(0);
  e.min = s(s.size() - 1);
  return e;
}

CVector seeded_complex_vector(Eigen::Index size, std::uint64_t seed)
{
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  CVector v(size);
  for (Eigen::Index i = 0; i < size; ++i)
  {
    const double re = dist(gen);
    const double im = dist(gen);
    v(i) = Complex(re, im);
  }
  return v;
}

std::vector<GepEigenpair> dense_gep(const CMatrix &p, const CMatrix &q, const GepOptions &options)
{
  const Eigen::Index m = p.rows();
  if (p.cols() != m || q.rows() != m || q.cols() != m)
    throw Error(ErrorKind::DimensionMismatch, "dense_gep expects square P and Q of equal order");
  std::vector<GepEigenpair> out;
  if (m == 0)
    return out;

  const SingularExtremes qs = singular_extremes(q);
  const bool invertible =
      qs.min > 0.0 && qs.max / qs.min <= options.max_q_condition;

  if (invertible)
  {
    Eigen::PartialPivLU<CMatrix> lu(q);
    Eigen::ComplexEigenSolver<CMatrix> es(lu.solve(p));
    for (Eigen::Index j = 0; j < m; ++j)
    {
      GepEigenpair e;
      e.alpha = es.eigenvalues()(j);
      e.beta = 1.0;
      e.right = es.eigenvectors().col(j).normalized();
      out.push_back(std::move(e));
    }
  }
  else
  {
    // Pick the best conditioned of a few seeded shifts.
    const double pn = p.norm(), qn = q.norm();
    const double scale = qn > 0.0 ? 0.1 * std::max(pn, std::numeric_limits<double>::min()) / qn
                                  : 1.0;
    std::mt19937_64 gen(0x5eed5eedULL);
    std::uniform_real_distribution<double> dist(0.5, 1.0);
    Complex tau{};
    double best = -1.0;
    for (int attempt = 0; attempt < 8; ++attempt)
    {
      const double re = dist(gen), im = dist(gen);
      const Complex cand = scale * Complex(re, im);
      const double r = singular_extremes(p - cand * q).ratio();
      if (r > best)
      {
        best = r;
        tau = cand;
      }
      if (best > 1e-8)
        break;
    }
    if (best <= 0.0)
      throw Error(ErrorKind::SingularProblem,
                  "pencil is singular: P - tau Q is singular for every trial shift");
    Eigen::PartialPivLU<CMatrix> lu(p - tau * q);
    const CMatrix k = lu.solve(q);
    Eigen::ComplexEigenSolver<CMatrix> es(k);
    const double knorm = singular_extremes(k).max;
    for (Eigen::Index j = 0; j < m; ++j)
    {
      const Complex theta = es.eigenvalues()(j);
      GepEigenpair e;
      e.alpha = 1.0 + tau * theta;
      e.beta = theta;
      e.finite = std::abs(theta) > options.tol_infinite * knorm;
      e.right = es.eigenvectors().col(j).normalized();
      out.push_back(std::move(e));
    }
  }

  if (options.want_left)
    for (auto &e : out)
      if (e.finite)
        e.left = left_null_vector(p, q, e.value());
  return out;
}

CMatrix kron(const CMatrix &x, const CMatrix &y)
{
  CMatrix r(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      r.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return r;
}

CVector kron(const CVector &x, const CVector &y)
{
  CVector r(x.size() * y.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    r.segment(i * y.size(), y.size()) = x(i) * y;
  return r;
}

}  // namespace mepnl::linalg
