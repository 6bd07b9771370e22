// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mepnl/core.hpp"

namespace mepnl
{

/// Operator determinants on C^m (x) C^n, with z = y (x) x:
///   Delta0 = B2 (x) A3 - B3 (x) A2
///   Delta1 = B3 (x) A1 - B1 (x) A3
///   Delta2 = B1 (x) A2 - B2 (x) A1
/// Delta1 z = lambda Delta0 z and Delta2 z = mu Delta0 z.
struct DeltaPencil
{
  CMatrix delta0;
  CMatrix delta1;
  CMatrix delta2;
};

inline constexpr std::size_t kDefaultDeltaCap = 4000;

// n*m limit for the dense operator determinants; MEPNL_CAP overrides the default.
std::size_t delta_cap();

DeltaPencil assemble_delta(const TwoParProblem &problem, std::optional<std::size_t> cap = {});

struct DeltaOptions
{
  double residual_tol = 1e-8;
  double rank_one_tol = 1e-2;  // sigma_2 / sigma_1 of the reshaped eigenvector
  double singular_rcond = 1e-14;
  std::optional<std::size_t> cap;
};

struct DeltaWarning
{
  Complex lambda{};
  std::string reason;
};

struct DeltaSolution
{
  // Sorted by |lambda|; z[i] is the eigenvector behind quadruplets[i].
  std::vector<Quadruplet> quadruplets;
  std::vector<CVector> z;
  std::vector<DeltaWarning> warnings;
  std::size_t eigenvalue_count = 0;
};

DeltaSolution delta_solve(const TwoParProblem &problem, const DeltaOptions &options = {});
DeltaSolution delta_solve(const TwoParProblem &problem, const DeltaPencil &pencil,
                          const DeltaOptions &options = {});

// z^H Delta2 z / z^H Delta0 z.
Complex delta2_rayleigh(const DeltaPencil &pencil, const CVector &z);

}  // namespace mepnl
