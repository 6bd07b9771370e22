// SPDX-License-Identifier: Apache-2.0

#include "mepnl/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "mepnl/linalg.hpp"

namespace mepnl
{

namespace
{

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_start(const TwoParProblem &problem, const CVector &x0)
{
  if (x0.size() != problem.n())
    throw Error(ErrorKind::DimensionMismatch, "starting vector has length " +
                                                  std::to_string(x0.size()) + ", expected " +
                                                  std::to_string(problem.n()));
  if (x0.norm() == 0.0 || !x0.allFinite())
    throw Error(ErrorKind::InvalidArgument, "starting vector must be nonzero and finite");
}

Complex bilinear(const CVector &w, const SparseMatrix &a, const CVector &v)
{
  return (w.transpose() * (a * v))(0);
}

}  // namespace

int select_branch(const TwoParProblem &problem, Complex lambda, const SolverConfig &config)
{
  if (!config.mu_target)
    return config.branch_id;
  const auto spec = eigenpairs_at(problem, lambda, false);
  if (spec.branches.empty())
    throw Error(ErrorKind::NonSimple, "the pencil has no finite eigenvalue at the start point");
  const auto it = std::min_element(
      spec.branches.begin(), spec.branches.end(), [&](const BranchPoint &a, const BranchPoint &b) {
        return std::abs(a.mu - *config.mu_target) < std::abs(b.mu - *config.mu_target);
      });
  return it->branch_id;
}

SolveResult augmented_newton(NepView &nep, const SolverConfig &config, Complex lambda0,
                             const CVector &x0)
{
  const TwoParProblem &problem = nep.problem();
  check_start(problem, x0);
  if (config.tol <= 0.0 || config.maxit < 1)
    throw Error(ErrorKind::InvalidArgument, "solver needs tol > 0 and maxit >= 1");
  const CVector d = config.d ? *config.d : CVector(x0.conjugate() / x0.squaredNorm());
  if (d.size() != problem.n())
    throw Error(ErrorKind::DimensionMismatch, "normalization vector d has the wrong length");
  if (std::abs((d.transpose() * x0)(0)) == 0.0)
    throw Error(ErrorKind::InvalidArgument, "d^T x0 must be nonzero");

  const std::size_t fact0 = nep.factorization_count();
  SolveResult out;
  CVector x = x0;
  Complex lambda = lambda0;
  for (int k = 0;; ++k)
  {
    const auto t0 = Clock::now();
    const BranchPoint bp = nep.branch_at(lambda);
    Quadruplet q;
    q.lambda = lambda;
    q.mu = bp.mu;
    q.x = x;
    q.y = bp.y;
    q.c_normalized = !bp.c_degenerate;
    q.residuals = residuals(problem, q);

    IterationRecord rec{k, lambda, bp.mu, q.residuals.res_a, q.residuals.res_b};
    if (q.residuals.res_a <= config.tol)
    {
      rec.seconds = since(t0);
      out.trace.iterations.push_back(rec);
      out.trace.converged = true;
      out.trace.termination = "converged";
      out.quadruplet = std::move(q);
      break;
    }
    if (k >= config.maxit)
    {
      rec.seconds = since(t0);
      out.trace.iterations.push_back(rec);
      out.trace.termination = "maxit";
      out.quadruplet = std::move(q);
      break;
    }

    const Complex gp = derivatives(problem, bp, 1).g[0];
    const CVector rhs = problem.a(2) * x + gp * (problem.a(3) * x);
    const CVector u = nep.solve_unchecked(lambda, rhs);
    const Complex dtu = (d.transpose() * u)(0);
    if (dtu == 0.0 || !std::isfinite(std::abs(dtu)))
      throw Error(ErrorKind::NoConvergence, "Newton step is undefined (d^T u = 0) at iteration " +
                                                std::to_string(k));
    const Complex alpha = 1.0 / dtu;
    x = alpha * u;
    lambda -= alpha;
    rec.step = alpha;
    rec.seconds = since(t0);
    out.trace.iterations.push_back(rec);
  }
  out.trace.factorizations = nep.factorization_count() - fact0;
  return out;
}

RayleighSolution rayleigh_gep(const TwoParProblem &problem, const CVector &v, const CVector &w,
                              Complex reference)
{
  if (v.size() != problem.n() || w.size() != problem.n())
    throw Error(ErrorKind::DimensionMismatch, "projection vectors must have length n");
  const Complex a1 = bilinear(w, problem.a(1), v);
  const Complex a2 = bilinear(w, problem.a(2), v);
  const Complex a3 = bilinear(w, problem.a(3), v);
  if (std::abs(a3) <= 1e-14 * w.norm() * v.norm() * problem.a_norm(3))
    throw Error(ErrorKind::DegenerateProjection,
                "w^T A3 v vanishes; mu cannot be recovered from the projected equation");

  const CMatrix p = a3 * problem.b(1) - a1 * problem.b(3);
  const CMatrix q = a2 * problem.b(3) - a3 * problem.b(2);
  linalg::GepOptions opts;
  opts.want_left = false;
  const auto pairs = linalg::dense_gep(p, q, opts);

  RayleighSolution out;
  const linalg::GepEigenpair *best = nullptr;
  for (const auto &e : pairs)
  {
    if (!e.finite)
      continue;
    const Complex l = e.value();
    out.candidates.push_back(l);
    if (!best)
    {
      best = &e;
      continue;
    }
    const double db = std::abs(best->value() - reference), dl = std::abs(l - reference);
    if (dl < db || (dl == db && std::abs(l) < std::abs(best->value())))
      best = &e;
  }
  if (!best)
    throw Error(ErrorKind::DegenerateProjection, "the projected GEP has no finite eigenvalue");
  out.lambda = best->value();
  out.mu = -(a1 + out.lambda * a2) / a3;
  out.y = best->right;
  normalize_by_c(problem.c(), out.y);
  return out;
}

SolveResult resinv(NepView &nep, const SolverConfig &config, const CVector &x0)
{
  const TwoParProblem &problem = nep.problem();
  check_start(problem, x0);
  if (config.tol <= 0.0 || config.maxit < 1)
    throw Error(ErrorKind::InvalidArgument, "solver needs tol > 0 and maxit >= 1");
  const Complex sigma = config.sigma;
  const std::size_t fact0 = nep.factorization_count();

  CVector w;
  if (config.w_proj)
    w = *config.w_proj;
  else
    w = nep.solve_shifted_adjoint(sigma, x0).conjugate().normalized();
  if (w.size() != problem.n())
    throw Error(ErrorKind::DimensionMismatch, "projection vector w has the wrong length");

  SolveResult out;
  CVector x = x0.normalized();
  Complex reference = sigma;
  for (int k = 0;; ++k)
  {
    const auto t0 = Clock::now();
    RayleighSolution r;
    try
    {
      r = rayleigh_gep(problem, x, w, reference);
    }
    catch (const Error &e)
    {
      if (e.kind() != ErrorKind::DegenerateProjection)
        throw;
      throw Error(ErrorKind::DegenerateProjection,
                  "resinv iteration " + std::to_string(k) + ": " + e.what());
    }
    Quadruplet q;
    q.lambda = r.lambda;
    q.mu = r.mu;
    q.x = x;
    q.y = r.y;
    q.residuals = residuals(problem, q);
    IterationRecord rec{k, r.lambda, r.mu, q.residuals.res_a, q.residuals.res_b};
    if (q.residuals.res_a <= config.tol || k >= config.maxit)
    {
      rec.seconds = since(t0);
      out.trace.iterations.push_back(rec);
      out.trace.converged = q.residuals.res_a <= config.tol;
      out.trace.termination = out.trace.converged ? "converged" : "maxit";
      out.quadruplet = std::move(q);
      break;
    }
    const CVector z = problem.apply_a(r.lambda, r.mu, x);
    CVector u = x - nep.solve_shifted(sigma, z);
    x = u / u.norm();
    reference = r.lambda;
    rec.seconds = since(t0);
    out.trace.iterations.push_back(rec);
  }
  out.trace.factorizations = nep.factorization_count() - fact0;
  return out;
}

TwoParProblem project_2ep(const TwoParProblem &problem, const CMatrix &v, const CMatrix &w)
{
  if (v.rows() != problem.n() || w.rows() != problem.n() || v.cols() != w.cols() ||
      v.cols() < 1)
    throw Error(ErrorKind::DimensionMismatch,
                "projection bases must be n x p with equal p >= 1; got " +
                    std::to_string(v.rows()) + "x" + std::to_string(v.cols()) + " and " +
                    std::to_string(w.rows()) + "x" + std::to_string(w.cols()));
  std::array<SparseMatrix, 3> a;
  for (int k = 1; k <= 3; ++k)
  {
    const CMatrix pk = w.transpose() * (problem.a(k) * v);
    a[k - 1] = pk.sparseView(0.0, 0.0);
  }
  return TwoParProblem(std::move(a), {problem.b(1), problem.b(2), problem.b(3)}, problem.c(),
                       problem.label() + " (projected)");
}

}  // namespace mepnl
