// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mepnl/nep.hpp"

namespace mepnl
{

struct SolverConfig
{
  double tol = 1e-10;  // on the relative A-residual
  int maxit = 100;
  // Newton normalization d (d^T x_k = 1 after each step). Defaults to
  // conj(x0) / ||x0||^2.
  std::optional<CVector> d;
  // Right Rayleigh functional vector of resinv (used as w^T). Defaults to
  // conj(M(sigma)^{-H} x0), normalized.
  std::optional<CVector> w_proj;
  Complex sigma{};
  // Branch at the starting point: index in |mu| order, or nearest to mu_target.
  int branch_id = 0;
  std::optional<Complex> mu_target;
};

// Resolves the config's branch choice at lambda.
int select_branch(const TwoParProblem &problem, Complex lambda, const SolverConfig &config);

struct IterationRecord
{
  int k = 0;
  Complex lambda{};
  Complex mu{};
  double res_a = 0.0;
  double res_b = 0.0;
  // Newton: lambda_{k+1} = lambda_k - step. Zero for resinv.
  Complex step{};
  double seconds = 0.0;
};

struct SolveTrace
{
  std::vector<IterationRecord> iterations;
  bool converged = false;
  std::string termination;
  std::size_t factorizations = 0;
};

struct SolveResult
{
  Quadruplet quadruplet;
  SolveTrace trace;
};

// Augmented Newton iteration on M(lambda) x = 0 with one linear solve per step:
//   u = M(lambda_k)^{-1} M'(lambda_k) x_k,  alpha_k = 1 / (d^T u),
//   x_{k+1} = alpha_k u,  lambda_{k+1} = lambda_k - alpha_k.
SolveResult augmented_newton(NepView &nep, const SolverConfig &config, Complex lambda0,
                             const CVector &x0);

struct RayleighSolution
{
  Complex lambda{};
  Complex mu{};
  CVector y;
  std::vector<Complex> candidates;  // all finite lambdas of the projected GEP
};

// Scalar Petrov-Galerkin projection w^T A(lambda, mu) v = 0 combined with the
// B equation: an m x m GEP in lambda, mu in closed form. The eigenvalue
// nearest to `reference` is selected.
RayleighSolution rayleigh_gep(const TwoParProblem &problem, const CVector &v, const CVector &w,
                              Complex reference);

// Residual inverse iteration with the Rayleigh functional from rayleigh_gep
// and a fixed shift config.sigma.
SolveResult resinv(NepView &nep, const SolverConfig &config, const CVector &x0);

// The same B equation with A_j replaced by W^T A_j V.
TwoParProblem project_2ep(const TwoParProblem &problem, const CMatrix &v, const CMatrix &w);

}  // namespace mepnl
