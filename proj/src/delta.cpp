// SPDX-License-Identifier: Apache-2.0

#include "mepnl/delta.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "mepnl/linalg.hpp"

namespace mepnl
{

std::size_t delta_cap()
{
  if (const char *env = std::getenv("MEPNL_CAP"))
  {
    char *end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0)
      return static_cast<std::size_t>(v);
  }
  return kDefaultDeltaCap;
}

DeltaPencil assemble_delta(const TwoParProblem &problem, std::optional<std::size_t> cap)
{
  const std::size_t limit = cap ? *cap : delta_cap();
  const auto size = static_cast<std::size_t>(problem.n()) * static_cast<std::size_t>(problem.m());
  if (size > limit)
    throw Error(ErrorKind::TooLarge, "operator determinants of order n*m = " +
                                         std::to_string(size) + " exceed the cap of " +
                                         std::to_string(limit) + " (set MEPNL_CAP to raise it)");
  CMatrix a[3];
  for (int k = 0; k < 3; ++k)
    a[k] = CMatrix(problem.a(k + 1));
  const auto &b1 = problem.b(1), &b2 = problem.b(2), &b3 = problem.b(3);
  DeltaPencil out;
  out.delta0 = linalg::kron(b2, a[2]) - linalg::kron(b3, a[1]);
  out.delta1 = linalg::kron(b3, a[0]) - linalg::kron(b1, a[2]);
  out.delta2 = linalg::kron(b1, a[1]) - linalg::kron(b2, a[0]);
  return out;
}

DeltaSolution delta_solve(const TwoParProblem &problem, const DeltaOptions &options)
{
  return delta_solve(problem, assemble_delta(problem, options.cap), options);
}

DeltaSolution delta_solve(const TwoParProblem &problem, const DeltaPencil &pencil,
                          const DeltaOptions &options)
{
  const Eigen::Index n = problem.n(), m = problem.m();
  Eigen::PartialPivLU<CMatrix> lu(pencil.delta0);
  const double rcond = pencil.delta0.size() == 0 ? 0.0 : lu.rcond();
  if (!(rcond > options.singular_rcond))
    throw Error(ErrorKind::SingularProblem,
                "Delta0 is numerically singular (rcond " + std::to_string(rcond) + ")");
  const CMatrix k = lu.solve(pencil.delta1);
  Eigen::ComplexEigenSolver<CMatrix> eig(k, true);
  if (eig.info() != Eigen::Success)
    throw Error(ErrorKind::NoConvergence, "eigenvalue solver failed on Delta0^{-1} Delta1");

  DeltaSolution out;
  out.eigenvalue_count = static_cast<std::size_t>(eig.eigenvalues().size());
  for (Eigen::Index e = 0; e < eig.eigenvalues().size(); ++e)
  {
    const Complex lambda = eig.eigenvalues()(e);
    const CVector z = eig.eigenvectors().col(e);
    const Eigen::Map<const CMatrix> zmat(z.data(), n, m);
    Eigen::JacobiSVD<CMatrix> svd(zmat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto &s = svd.singularValues();
    if (s.size() > 1 && s(1) > options.rank_one_tol * s(0))
    {
      out.warnings.push_back({lambda, "eigenvector is not rank one (sigma2/sigma1 = " +
                                          std::to_string(s(1) / s(0)) + ")"});
      continue;
    }
    Quadruplet q;
    q.lambda = lambda;
    q.x = svd.matrixU().col(0);
    q.y = svd.matrixV().col(0).conjugate();
    const CVector a3x = problem.a(3) * q.x;
    const double a3x_sq = a3x.squaredNorm();
    if (a3x_sq == 0.0)
    {
      out.warnings.push_back({lambda, "A3 x vanishes; mu is undetermined"});
      continue;
    }
    const CVector rest = problem.a(1) * q.x + lambda * (problem.a(2) * q.x);
    q.mu = -a3x.dot(rest) / a3x_sq;
    q.c_normalized = normalize_by_c(problem.c(), q.y);
    q.residuals = residuals(problem, q);
    if (!(q.residuals.res_a <= options.residual_tol && q.residuals.res_b <= options.residual_tol))
    {
      out.warnings.push_back({lambda, "residual check failed (resA " +
                                          std::to_string(q.residuals.res_a) + ", resB " +
                                          std::to_string(q.residuals.res_b) + ")"});
      continue;
    }
    out.quadruplets.push_back(std::move(q));
    out.z.push_back(z);
  }

  std::vector<std::size_t> order(out.quadruplets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const Complex a = out.quadruplets[i].lambda, b = out.quadruplets[j].lambda;
    if (std::abs(a) != std::abs(b))
      return std::abs(a) < std::abs(b);
    if (a.real() != b.real())
      return a.real() < b.real();
    return a.imag() < b.imag();
  });
  DeltaSolution sorted;
  sorted.warnings = std::move(out.warnings);
  sorted.eigenvalue_count = out.eigenvalue_count;
  for (std::size_t i : order)
  {
    sorted.quadruplets.push_back(std::move(out.quadruplets[i]));
    sorted.z.push_back(std::move(out.z[i]));
  }
  return sorted;
}

Complex delta2_rayleigh(const DeltaPencil &pencil, const CVector &z)
{
  return z.dot(pencil.delta2 * z) / z.dot(pencil.delta0 * z);
}

}  // namespace mepnl
