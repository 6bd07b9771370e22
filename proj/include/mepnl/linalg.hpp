// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "mepnl/types.hpp"

namespace mepnl::linalg
{

/// One eigentriple of the dense pencil P y = mu Q y in homogeneous form
/// mu = alpha / beta. Left vectors satisfy w^H P = mu w^H Q.
struct GepEigenpair
{
  Complex alpha{};
  Complex beta{};
  bool finite = true;
  CVector right;
  CVector left;  // empty unless requested and finite

  Complex value() const { return alpha / beta; }
};

struct GepOptions
{
  bool want_left = true;
  // Above this condition number Q is not inverted; a shifted transform is used.
  double max_q_condition = 1e8;
  // |beta| relative to the transformed operator norm below which mu is infinite.
  double tol_infinite = 1e-10;
};

// All eigentriples of the pencil (P, Q) of order m. When cond(Q) is moderate
// the pencil is reduced to Q^{-1} P; otherwise to (P - tau Q)^{-1} Q for a
// seeded complex shift tau.
std::vector<GepEigenpair> dense_gep(const CMatrix &p, const CMatrix &q,
                                    const GepOptions &options = {});

struct SingularExtremes
{
  double max = 0.0;
  double min = 0.0;
  double ratio() const { return max == 0.0 ? 0.0 : min / max; }
};

SingularExtremes singular_extremes(const CMatrix &a);

// Deterministic entries uniform in [-1,1] + i[-1,1].
CVector seeded_complex_vector(Eigen::Index size, std::uint64_t seed);

// Column-major Kronecker product: block (i,j) of X (x) Y is x_ij Y.
CMatrix kron(const CMatrix &x, const CMatrix &y);
CVector kron(const CVector &x, const CVector &y);

}  // namespace mepnl::linalg
