// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "mepnl/types.hpp"

namespace mepnl::test
{

inline CMatrix random_dense(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  CMatrix a(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i)
      a(i, j) = dist(rng);
  return a;
}

inline CVector random_vector(Eigen::Index n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v(i) = Complex(dist(rng), dist(rng));
  return v;
}

// Eigenvalues of A1 + l A2 + l^2 A3 from the first companion form
// [0 I; -A1 -A2] z = l [I 0; 0 A3] z, reduced with A3^{-1}.
inline std::vector<Complex> qep_eigenvalues(const CMatrix &a1, const CMatrix &a2,
                                            const CMatrix &a3)
{
  const Eigen::Index n = a1.rows();
  const Eigen::PartialPivLU<CMatrix> lu(a3);
  CMatrix l = CMatrix::Zero(2 * n, 2 * n);
  l.topRightCorner(n, n).setIdentity();
  l.bottomLeftCorner(n, n) = -lu.solve(a1);
  l.bottomRightCorner(n, n) = -lu.solve(a2);
  Eigen::ComplexEigenSolver<CMatrix> es(l, false);
  std::vector<Complex> out(es.eigenvalues().data(), es.eigenvalues().data() + 2 * n);
  return out;
}

inline double nearest_distance(Complex z, const std::vector<Complex> &set)
{
  double best = std::numeric_limits<double>::infinity();
  for (const Complex &s : set)
    best = std::min(best, std::abs(z - s));
  return best;
}

// k-th central difference quotient with nodes t + (j - k/2) h, j = 0..k.
inline Complex central_difference(const std::function<Complex(Complex)> &f, Complex t, int k,
                                  double h)
{
  Complex sum = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= k; ++j)
  {
    const double sign = ((k - j) % 2 == 0) ? 1.0 : -1.0;
    sum += sign * binom * f(t + (static_cast<double>(j) - 0.5 * k) * h);
    binom = binom * (k - j) / (j + 1);
  }
  return sum / std::pow(h, k);
}

// Richardson table over steps h, h/2, h/4, ... (error expansion in h^2).
inline Complex extrapolated_derivative(const std::function<Complex(Complex)> &f, Complex t, int k,
                                       double h, int levels)
{
  std::vector<Complex> row(static_cast<std::size_t>(levels));
  for (int i = 0; i < levels; ++i)
    row[i] = central_difference(f, t, k, h / std::pow(2.0, i));
  for (int level = 1; level < levels; ++level)
  {
    const double factor = std::pow(4.0, level);
    for (int i = levels - 1; i >= level; --i)
      row[i] = (factor * row[i] - row[i - 1]) / (factor - 1.0);
  }
  return row.back();
}

inline double relative_error(Complex got, Complex want)
{
  const double scale = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / scale;
}

}  // namespace mepnl::test
