// SPDX-License-Identifier: Apache-2.0

#include "mepnl/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/SVD>

#include "mepnl/linalg.hpp"

namespace mepnl
{

namespace
{

struct RawPencil
{
  const CMatrix &b1, &b2, &b3;
};

double b_scale(const RawPencil &b, Complex lambda, Complex mu)
{
  return b.b1.norm() + std::abs(lambda) * b.b2.norm() + std::abs(mu) * b.b3.norm();
}

double relative_residual(const RawPencil &b, Complex lambda, Complex mu, const CVector &y)
{
  const double num = ((b.b1 + lambda * b.b2 + mu * b.b3) * y).norm();
  if (num == 0.0)
    return 0.0;
  return num / (b_scale(b, lambda, mu) * y.norm());
}

// One Newton step on [B(lambda,mu) y; c^T y - 1] = 0 in (y, mu). Accepted
// only when it lowers the residual and moves mu by a small fraction of the
// distance to its nearest neighbour in the spectrum.
void refine(const RawPencil &b, const CVector &c, Complex lambda, double gap, BranchPoint &bp)
{
  const Eigen::Index m = bp.y.size();
  for (int step = 0; step < 2; ++step)
  {
    const double res = relative_residual(b, lambda, bp.mu, bp.y);
    if (res <= 1e-14)
      return;
    CMatrix j(m + 1, m + 1);
    j.topLeftCorner(m, m) = b.b1 + lambda * b.b2 + bp.mu * b.b3;
    j.topRightCorner(m, 1) = b.b3 * bp.y;
    j.bottomLeftCorner(1, m) = c.transpose();
    j(m, m) = 0.0;
    CVector f(m + 1);
    f.head(m) = j.topLeftCorner(m, m) * bp.y;
    f(m) = (c.transpose() * bp.y)(0) - 1.0;
    const CVector d = j.partialPivLu().solve(-f);
    if (!d.allFinite() || std::abs(d(m)) > 0.1 * gap)
      return;
    CVector y = bp.y + d.head(m);
    const Complex mu = bp.mu + d(m);
    if (relative_residual(b, lambda, mu, y) >= res)
      return;
    bp.y = std::move(y);
    bp.mu = mu;
  }
}

PencilSpectrum spectrum_of(const RawPencil &b, const CVector &c, Complex lambda, bool want_left)
{
  const CMatrix p = -(b.b1 + lambda * b.b2);
  linalg::GepOptions opts;
  opts.want_left = false;
  opts.tol_infinite = kTolInfinite;
  auto pairs = linalg::dense_gep(p, b.b3, opts);

  PencilSpectrum out;
  std::vector<Complex> mus;
  for (const auto &e : pairs)
    if (e.finite)
      mus.push_back(e.value());
  for (auto &e : pairs)
  {
    if (!e.finite)
    {
      out.infinite.push_back({e.alpha, e.beta, e.right});
      continue;
    }
    BranchPoint bp;
    bp.lambda = lambda;
    bp.mu = e.value();
    bp.y = e.right;
    bp.finite = true;
    bp.c_degenerate = !normalize_by_c(c, bp.y);
    if (!bp.c_degenerate)
    {
      double gap = std::numeric_limits<double>::infinity();
      for (const Complex other : mus)
        if (other != bp.mu)
          gap = std::min(gap, std::abs(other - bp.mu));
      refine(b, c, lambda, gap, bp);
    }
    out.branches.push_back(std::move(bp));
  }
  std::stable_sort(out.branches.begin(), out.branches.end(),
                   [](const BranchPoint &l, const BranchPoint &r) {
                     const double al = std::abs(l.mu), ar = std::abs(r.mu);
                     if (al != ar)
                       return al < ar;
                     if (l.mu.real() != r.mu.real())
                       return l.mu.real() < r.mu.real();
                     return l.mu.imag() < r.mu.imag();
                   });
  for (std::size_t i = 0; i < out.branches.size(); ++i)
  {
    auto &bp = out.branches[i];
    bp.branch_id = static_cast<int>(i);
    if (want_left)
    {
      Eigen::JacobiSVD<CMatrix> svd(b.b1 + lambda * b.b2 + bp.mu * b.b3, Eigen::ComputeFullU);
      bp.w = svd.matrixU().col(svd.matrixU().cols() - 1);
    }
  }
  return out;
}

RawPencil raw(const TwoParProblem &problem)
{
  return RawPencil{problem.b(1), problem.b(2), problem.b(3)};
}

}  // namespace

PencilSpectrum eigenpairs_at(const TwoParProblem &problem, Complex lambda, bool want_left)
{
  return spectrum_of(raw(problem), problem.c(), lambda, want_left);
}

void attach_left(const TwoParProblem &problem, BranchPoint &bp)
{
  const CMatrix b = problem.b_matrix(bp.lambda, bp.mu);
  Eigen::JacobiSVD<CMatrix> svd(b, Eigen::ComputeFullU);
  bp.w = svd.matrixU().col(b.rows() - 1);
}

double pencil_residual(const TwoParProblem &problem, const BranchPoint &bp)
{
  return relative_residual(raw(problem), bp.lambda, bp.mu, bp.y);
}

CVector default_normalization(const std::array<CMatrix, 3> &b, Complex reference_lambda,
                              std::uint64_t seed)
{
  const RawPencil pencil{b[0], b[1], b[2]};
  CVector c;
  for (std::uint64_t s = seed; s < seed + 16; ++s)
  {
    c = linalg::seeded_complex_vector(b[0].rows(), s);
    const auto spec = spectrum_of(pencil, c, reference_lambda, false);
    const bool degenerate = std::any_of(spec.branches.begin(), spec.branches.end(),
                                        [](const BranchPoint &bp) { return bp.c_degenerate; });
    if (!degenerate)
      break;
  }
  return c;
}

BranchState::BranchState(const TwoParProblem &problem, Complex reference_lambda)
  : reference_lambda_(reference_lambda)
{
  reference_ = eigenpairs_at(problem, reference_lambda, true).branches;
  last_ = reference_;
  slope_.assign(reference_.size(), std::nullopt);
}

const BranchPoint &BranchState::last_point(int branch_id) const
{
  if (branch_id < 0 || branch_id >= branch_count())
    throw Error(ErrorKind::InvalidArgument, "branch " + std::to_string(branch_id) +
                                                " does not exist (" +
                                                std::to_string(branch_count()) + " branches)");
  return last_[branch_id];
}

namespace
{

Complex slope_at(const TwoParProblem &problem, const BranchPoint &bp)
{
  if (bp.c_degenerate)
    return 0.0;
  const JacobianJ j = jacobian(problem, bp);
  if (j.singular())
    return 0.0;
  const Eigen::Index m = bp.y.size();
  CVector rhs = CVector::Zero(m + 1);
  rhs.head(m) = -(problem.b(2) * bp.y);
  return j.solve(rhs)(m);
}

BranchPoint advance(const TwoParProblem &problem, const BranchPoint &prev, Complex slope,
                    Complex lambda_new, int depth)
{
  const Complex step = lambda_new - prev.lambda;
  const Complex predicted = prev.mu + slope * step;
  auto spec = eigenpairs_at(problem, lambda_new, false);
  auto &cands = spec.branches;
  if (cands.empty())
    throw AmbiguousBranchError(lambda_new, Complex(NAN, NAN), Complex(NAN, NAN),
                               "no finite pencil eigenvalue left to continue the branch at "
                               "lambda = " + std::to_string(lambda_new.real()) + "+" +
                                   std::to_string(lambda_new.imag()) + "i");

  std::vector<std::size_t> order(cands.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(cands[a].mu - predicted) < std::abs(cands[b].mu - predicted);
  });
  const BranchPoint &best = cands[order[0]];
  if (cands.size() > 1)
  {
    const BranchPoint &second = cands[order[1]];
    const double d1 = std::abs(best.mu - predicted);
    const double d2 = std::abs(second.mu - predicted);
    if (d1 > 0.25 * d2 && depth < 12)
    {
      const Complex mid = 0.5 * (prev.lambda + lambda_new);
      const BranchPoint half = advance(problem, prev, slope, mid, depth + 1);
      return advance(problem, half, slope_at(problem, half), lambda_new, depth + 1);
    }
    if (d2 - d1 <= 1e-12 * std::max(1.0, std::abs(predicted)))
      throw AmbiguousBranchError(lambda_new, best.mu, second.mu,
                                 "two pencil eigenvalues are equally close to the branch "
                                 "prediction (near a double eigenvalue)");
  }
  return best;
}

}  // namespace

BranchPoint continue_branch(const TwoParProblem &problem, BranchState &state, int branch_id,
                            Complex lambda_new)
{
  const BranchPoint &prev = state.last_point(branch_id);
  if (lambda_new == prev.lambda)
    return prev;
  auto &slope = state.slope_[branch_id];
  if (!slope)
    slope = slope_at(problem, prev);
  BranchPoint next = advance(problem, prev, *slope, lambda_new, 0);
  next.branch_id = branch_id;
  attach_left(problem, next);
  state.last_[branch_id] = next;
  state.slope_[branch_id].reset();
  return next;
}

JacobianJ::JacobianJ(CMatrix matrix) : matrix_(std::move(matrix)), lu_(matrix_)
{
  Eigen::JacobiSVD<CMatrix> svd(matrix_);
  const auto &s = svd.singularValues();
  extremes_.max = s(0);
  extremes_.min = s(s.size() - 1);
}

JacobianJ jacobian(const TwoParProblem &problem, const BranchPoint &bp)
{
  const Eigen::Index m = problem.m();
  if (bp.y.size() != m)
    throw Error(ErrorKind::DimensionMismatch, "branch point vector does not match the problem");
  CMatrix j(m + 1, m + 1);
  j.topLeftCorner(m, m) = problem.b_matrix(bp.lambda, bp.mu);
  j.topRightCorner(m, 1) = problem.b(3) * bp.y;
  j.bottomLeftCorner(1, m) = problem.c().transpose();
  j(m, m) = 0.0;
  return JacobianJ(std::move(j));
}

BranchDerivatives derivatives(const TwoParProblem &problem, const BranchPoint &bp, int k)
{
  if (k < 1)
    throw Error(ErrorKind::InvalidArgument, "derivative order must be positive");
  const JacobianJ j = jacobian(problem, bp);
  if (j.singular())
    throw Error(ErrorKind::SingularJacobian,
                "J is singular (sigma_min/||J|| = " + std::to_string(j.relative_sigma_min()) +
                    "): the pencil eigenvalue has a Jordan chain of length two or more");
  const Eigen::Index m = problem.m();
  const CMatrix &b2 = problem.b(2), &b3 = problem.b(3);

  BranchDerivatives d;
  // b3y[j] = B3 y^{(j)}, with b3y[0] = B3 y.
  std::vector<CVector> b3y{b3 * bp.y};
  d.y.reserve(static_cast<std::size_t>(k));
  d.g.reserve(static_cast<std::size_t>(k));
  for (int order = 1; order <= k; ++order)
  {
    // d^k/dl^k (l B2 y) = l B2 y^{(k)} + k B2 y^{(k-1)}
    const CVector &prev = order == 1 ? bp.y : d.y[order - 2];
    CVector bk = static_cast<double>(order) * (b2 * prev);
    double binom = 1.0;  // C(order, j), updated incrementally
    for (int jj = 1; jj <= order - 1; ++jj)
    {
      binom = binom * (order - jj + 1) / jj;
      bk += binom * d.g[order - jj - 1] * b3y[jj];
    }
    CVector rhs = CVector::Zero(m + 1);
    rhs.head(m) = -bk;
    const CVector sol = j.solve(rhs);
    d.y.push_back(sol.head(m));
    d.g.push_back(sol(m));
    b3y.push_back(b3 * d.y.back());
  }
  return d;
}

Complex first_derivative_closed_form(const TwoParProblem &problem, const BranchPoint &bp)
{
  if (bp.w.size() != problem.m())
    throw Error(ErrorKind::MissingLeftVectors, "branch point carries no left eigenvector");
  return -bp.w.dot(problem.b(2) * bp.y) / bp.w.dot(problem.b(3) * bp.y);
}

namespace
{

struct Sample
{
  std::vector<Complex> mus;
  double scale = 1.0;

  double gap() const
  {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < mus.size(); ++i)
      for (std::size_t j = i + 1; j < mus.size(); ++j)
        g = std::min(g, std::abs(mus[i] - mus[j]));
    return g / scale;
  }

  std::pair<Complex, Complex> closest_pair() const
  {
    std::pair<Complex, Complex> best{mus[0], mus[1]};
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < mus.size(); ++i)
      for (std::size_t j = i + 1; j < mus.size(); ++j)
        if (std::abs(mus[i] - mus[j]) < g)
        {
          g = std::abs(mus[i] - mus[j]);
          best = {mus[i], mus[j]};
        }
    return best;
  }

  Complex largest() const
  {
    return *std::max_element(mus.begin(), mus.end(),
                             [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
  }
};

Sample sample_at(const TwoParProblem &problem, Complex lambda)
{
  Sample s;
  for (const auto &bp : eigenpairs_at(problem, lambda, false).branches)
    s.mus.push_back(bp.mu);
  const double b3 = problem.b_norm(3);
  const double num = problem.b_norm(1) + std::abs(lambda) * problem.b_norm(2);
  s.scale = b3 > 0.0 && num > 0.0 ? num / b3 : 1.0;
  return s;
}

template <class F>
std::optional<Complex> secant(F &&f, Complex x0, Complex x1)
{
  Complex f0 = f(x0), f1 = f(x1);
  for (int it = 0; it < 60; ++it)
  {
    if (f1 == 0.0)
      return x1;
    const Complex den = f1 - f0;
    if (den == 0.0 || !std::isfinite(std::abs(den)))
      return x1;
    const Complex x2 = x1 - f1 * (x1 - x0) / den;
    if (!std::isfinite(std::abs(x2)))
      return std::nullopt;
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f(x1);
    if (std::abs(x1 - x0) <= 1e-14 * std::max(1.0, std::abs(x1)))
      return x1;
  }
  return x1;
}

}  // namespace

RadiusScan convergence_radius_scan(const TwoParProblem &problem, int branch_id, Complex center,
                                   std::span<const Complex> grid)
{
  BranchState state(problem, center);
  state.last_point(branch_id);  // validates the branch

  const int count_center = state.branch_count();
  const std::size_t n = grid.size();
  std::vector<Sample> samples;
  samples.reserve(n);
  for (const Complex l : grid)
    samples.push_back(sample_at(problem, l));

  const std::size_t k = std::min<std::size_t>(4, n > 0 ? n - 1 : 0);
  auto neighbours = [&](std::size_t i) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(i));
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                        return std::abs(grid[a] - grid[i]) < std::abs(grid[b] - grid[i]);
                      });
    idx.resize(k);
    return idx;
  };

  std::vector<Singularity> found;
  auto record = [&](Complex l, Singularity::Kind kind, double measure) {
    for (const auto &s : found)
      if (s.kind == kind && std::abs(s.lambda - l) <= 1e-6 * std::max(1.0, std::abs(l)))
        return;
    found.push_back({l, kind, measure});
  };

  for (std::size_t i = 0; i < n; ++i)
  {
    const Sample &si = samples[i];
    const auto nb = neighbours(i);
    const double spacing = nb.empty() ? 1e-3 : std::abs(grid[nb[0]] - grid[i]);
    const Complex delta = std::max(1e-8, 1e-2 * spacing) * Complex(1.0, 0.5);

    if (static_cast<int>(si.mus.size()) < count_center)
    {
      // A branch left through infinity exactly at this sample.
      record(grid[i], Singularity::Kind::Pole, 0.0);
    }
    else if (!si.mus.empty())
    {
      const double big = std::abs(si.largest()) / si.scale;
      bool is_max = true;
      for (const auto j : nb)
        if (!samples[j].mus.empty() && std::abs(samples[j].largest()) / samples[j].scale > big)
          is_max = false;
      if (is_max && !nb.empty())
      {
        const int count = static_cast<int>(si.mus.size());
        auto f = [&](Complex l) -> Complex {
          const Sample s = sample_at(problem, l);
          if (static_cast<int>(s.mus.size()) < count)
            return 0.0;
          return 1.0 / s.largest();
        };
        if (auto root = secant(f, grid[i], grid[i] + delta))
        {
          const Sample s = sample_at(problem, *root);
          const bool lost = static_cast<int>(s.mus.size()) < count;
          const double inv = lost ? 0.0 : s.scale / std::abs(s.largest());
          if (inv <= 1e-6)
            record(*root, Singularity::Kind::Pole, inv);
        }
      }
    }

    if (si.mus.size() >= 2)
    {
      const double gap = si.gap();
      bool is_min = !nb.empty();
      for (const auto j : nb)
        if (samples[j].mus.size() >= 2 && samples[j].gap() < gap)
          is_min = false;
      if (is_min)
      {
        auto f = [&](Complex l) -> Complex {
          const Sample s = sample_at(problem, l);
          if (s.mus.size() < 2)
            return std::numeric_limits<double>::quiet_NaN();
          const auto [a, b] = s.closest_pair();
          return (a - b) * (a - b);
        };
        if (auto root = secant(f, grid[i], grid[i] + delta))
        {
          const Sample s = sample_at(problem, *root);
          if (s.mus.size() >= 2 && s.gap() <= 1e-6)
            record(*root, Singularity::Kind::DoubleEigenvalue, s.gap());
        }
      }
    }
  }

  RadiusScan out;
  out.radius = std::numeric_limits<double>::infinity();
  for (const auto &s : found)
    out.radius = std::min(out.radius, std::abs(s.lambda - center));
  std::sort(found.begin(), found.end(), [&](const Singularity &a, const Singularity &b) {
    return std::abs(a.lambda - center) < std::abs(b.lambda - center);
  });
  out.singularities = std::move(found);
  return out;
}

}  // namespace mepnl
