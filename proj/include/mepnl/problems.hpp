// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mepnl/pencil.hpp"

namespace mepnl
{

struct RandomScalings
{
  std::array<double, 3> alpha{1.0, 1.0 / 500.0, 1.0 / 50.0};
  std::array<double, 3> beta{1.0, 1.0 / 500.0, 1.0 / 50.0};
};

// A_j = alpha_j V_j F_j U_j and B_j = beta_j V_j G_j U_j with standard normal
// V, U and diagonal F, G. The normalization c is the seeded default.
TwoParProblem gen_random(Eigen::Index n, Eigen::Index m, std::uint64_t seed,
                         const RandomScalings &scalings = {});

// Quadratic problem (A1 + lambda A2 + lambda^2 A3) x = 0 as a 2EP with m = 2:
// B1 = [0 0; 0 -1], B2 = [0 1; 1 0], B3 = [-1 0; 0 0], c = e1. The pencil has
// the single finite branch g(lambda) = lambda^2 with y = [1, lambda].
TwoParProblem gen_qep(const CMatrix &a1, const CMatrix &a2, const CMatrix &a3);

struct SqrtParams
{
  Complex a{}, b{}, c{}, d{}, e{}, f{};
};

// B1 = [a b; c d], B2 = [0 e; f 0], B3 = I.
TwoParProblem gen_sqrt_nep(const CMatrix &a1, const CMatrix &a2, const CMatrix &a3,
                           const SqrtParams &params);

/// Closed-form branches g(lambda) = -(a+d)/2 +- sqrt(disc(lambda)) of gen_sqrt_nep,
/// principal square root.
struct SqrtBranches
{
  SqrtParams p;

  Complex discriminant(Complex lambda) const;
  Complex plus(Complex lambda) const;
  Complex minus(Complex lambda) const;
};

/// Wavenumber kappa(x). Piecewise constant on [x0, x1] (values[i] holds on
/// [breakpoints[i-1], breakpoints[i])), and
/// base + amplitude exp(-decay (x - x1)) sin(frequency (x - x1)) on [x1, x2].
struct WavenumberProfile
{
  std::vector<double> breakpoints;
  std::vector<double> values;
  double base = 1.0;
  double amplitude = 2.0;
  double decay = 1.0;
  double frequency = 40.0;

  // 2 + (-1)^floor(2x) 0.8 on [0, 4], 1 + 2 exp(-(x-4)) sin(40 (x-4)) beyond.
  static WavenumberProfile standard();
  static WavenumberProfile constant(double kappa);

  double left(double x) const;
  double right(double x, double x1) const;
  void validate() const;
};

struct HelmholtzConfig
{
  double x0 = 0.0;
  double x1 = 4.0;
  double x2 = 5.0;
  Eigen::Index n = 2000;  // finite difference points on [x0, x1], both ends included
  Eigen::Index m = 30;    // Chebyshev points on [x1, x2], both ends included
  WavenumberProfile profile = WavenumberProfile::standard();
  bool scaling = true;

  void validate() const;
};

/// u'' + kappa^2 u = lambda u on [x0, x2], u(x0) = 0, u'(x2) = 0, split at x1
/// with mu = u'(x1) / u(x1). The A equation is the finite difference part
/// (unknowns u at grid1), the B equation the Chebyshev part (unknowns at grid2,
/// grid2[0] = x1).
struct HelmholtzProblem
{
  TwoParProblem problem;
  HelmholtzConfig config;
  std::vector<double> grid1;
  std::vector<double> grid2;
  std::vector<double> kappa1;
  std::vector<double> kappa2;
  CMatrix cheb_diff;  // d/dx on grid2
};

HelmholtzProblem gen_helmholtz(const HelmholtzConfig &config);

struct Eigenfunction
{
  CVector u1;  // on grid1
  CVector u2;  // on grid2, scaled to match u1 at x1
  // |u1(x1) - u2(x1)| / max(|u1(x1)|, |u2(x1)|) after a joint fit of the
  // interface values and derivatives.
  double interface_mismatch = 0.0;
  // u'(x1) / u(x1) from a third order one-sided difference of u1 and from the
  // spectral derivative of u2.
  Complex ratio_fd{};
  Complex ratio_spectral{};
};

Eigenfunction reconstruct(const HelmholtzProblem &hp, const Quadruplet &q);

/// g_i(lambda) along a path of lambda values with continuation tracking.
struct BranchTable
{
  struct Gap
  {
    int branch_id = 0;
    std::size_t index = 0;  // the discontinuity lies between index - 1 and index
    Complex left{};
    Complex right{};
    std::string reason;  // "pole", "ambiguous", "lost"
  };

  std::vector<Complex> lambda;
  std::vector<int> branch_ids;
  std::vector<std::vector<Complex>> values;  // values[b][k]; NaN where unavailable
  std::vector<Gap> gaps;

  bool gap_before(std::size_t b, std::size_t k) const;
  // lambda_re,lambda_im then g<i>_re,g<i>_im,g<i>_gap per branch.
  std::string to_csv() const;
};

BranchTable tabulate_branches(const TwoParProblem &problem, std::span<const Complex> grid,
                              std::span<const int> branch_ids);

}  // namespace mepnl
