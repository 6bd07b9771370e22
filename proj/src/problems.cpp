// SPDX-License-Identifier: Apache-2.0

#include "mepnl/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace mepnl
{

namespace
{

CMatrix normal_matrix(std::mt19937_64 &rng, Eigen::Index rows, Eigen::Index cols)
{
  std::normal_distribution<double> dist;
  CMatrix r(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i)
      r(i, j) = dist(rng);
  return r;
}

CMatrix scaled_product(std::mt19937_64 &rng, Eigen::Index size, double scale)
{
  const CMatrix v = normal_matrix(rng, size, size);
  const CMatrix f = normal_matrix(rng, size, 1);
  const CMatrix u = normal_matrix(rng, size, size);
  return scale * (v * f.col(0).asDiagonal() * u);
}

void require_square(const CMatrix &a1, const CMatrix &a2, const CMatrix &a3)
{
  const Eigen::Index n = a1.rows();
  for (const CMatrix *a : {&a1, &a2, &a3})
    if (a->rows() != n || a->cols() != n)
      throw Error(ErrorKind::DimensionMismatch,
                  "A matrices must be square of equal order; got " + std::to_string(a1.rows()) +
                      "x" + std::to_string(a1.cols()) + ", " + std::to_string(a2.rows()) + "x" +
                      std::to_string(a2.cols()) + ", " + std::to_string(a3.rows()) + "x" +
                      std::to_string(a3.cols()));
}

std::array<SparseMatrix, 3> sparse_triple(const CMatrix &a1, const CMatrix &a2, const CMatrix &a3)
{
  return {SparseMatrix(a1.sparseView(0.0, 0.0)), SparseMatrix(a2.sparseView(0.0, 0.0)),
          SparseMatrix(a3.sparseView(0.0, 0.0))};
}

// Chebyshev-Gauss-Lobatto points cos(k pi / (m-1)) and the differentiation
// matrix with respect to xi.
void chebyshev(Eigen::Index m, std::vector<double> &xi, Eigen::MatrixXd &d)
{
  const Eigen::Index nn = m - 1;
  xi.resize(static_cast<std::size_t>(m));
  for (Eigen::Index k = 0; k < m; ++k)
    xi[k] = std::cos(std::numbers::pi * static_cast<double>(k) / static_cast<double>(nn));
  d.setZero(m, m);
  auto weight = [&](Eigen::Index k) {
    const double c = (k == 0 || k == nn) ? 2.0 : 1.0;
    return (k % 2 == 0) ? c : -c;
  };
  for (Eigen::Index i = 0; i < m; ++i)
  {
    double diag = 0.0;
    for (Eigen::Index j = 0; j < m; ++j)
    {
      if (i == j)
        continue;
      d(i, j) = weight(i) / weight(j) / (xi[i] - xi[j]);
      diag += d(i, j);
    }
    d(i, i) = -diag;
  }
}

}  // namespace

TwoParProblem gen_random(Eigen::Index n, Eigen::Index m, std::uint64_t seed,
                         const RandomScalings &scalings)
{
  if (n < 1 || m < 1)
    throw Error(ErrorKind::InvalidArgument, "gen_random needs n, m >= 1");
  std::mt19937_64 rng(seed);
  std::array<SparseMatrix, 3> a;
  for (int k = 0; k < 3; ++k)
    a[k] = scaled_product(rng, n, scalings.alpha[k]).sparseView(0.0, 0.0);
  std::array<CMatrix, 3> b;
  for (int k = 0; k < 3; ++k)
    b[k] = scaled_product(rng, m, scalings.beta[k]);
  CVector c = default_normalization(b);
  return TwoParProblem(std::move(a), std::move(b), std::move(c),
                       "random(n=" + std::to_string(n) + ",m=" + std::to_string(m) +
                           ",seed=" + std::to_string(seed) + ")");
}

TwoParProblem gen_qep(const CMatrix &a1, const CMatrix &a2, const CMatrix &a3)
{
  require_square(a1, a2, a3);
  CMatrix b1 = CMatrix::Zero(2, 2), b2 = CMatrix::Zero(2, 2), b3 = CMatrix::Zero(2, 2);
  b1(1, 1) = -1.0;
  b2(0, 1) = b2(1, 0) = 1.0;
  b3(0, 0) = -1.0;
  CVector c = CVector::Zero(2);
  c(0) = 1.0;
  return TwoParProblem(sparse_triple(a1, a2, a3), {b1, b2, b3}, c, "qep");
}

TwoParProblem gen_sqrt_nep(const CMatrix &a1, const CMatrix &a2, const CMatrix &a3,
                           const SqrtParams &p)
{
  require_square(a1, a2, a3);
  CMatrix b1(2, 2), b2 = CMatrix::Zero(2, 2);
  b1 << p.a, p.b, p.c, p.d;
  b2(0, 1) = p.e;
  b2(1, 0) = p.f;
  const CMatrix b3 = CMatrix::Identity(2, 2);
  std::array<CMatrix, 3> b{b1, b2, b3};
  CVector c = default_normalization(b);
  return TwoParProblem(sparse_triple(a1, a2, a3), std::move(b), std::move(c), "sqrt");
}

Complex SqrtBranches::discriminant(Complex lambda) const
{
  const Complex s = p.a + p.d;
  return s * s / 4.0 - p.a * p.d + (p.b + lambda * p.e) * (p.c + lambda * p.f);
}

Complex SqrtBranches::plus(Complex lambda) const
{
  return -(p.a + p.d) / 2.0 + std::sqrt(discriminant(lambda));
}

Complex SqrtBranches::minus(Complex lambda) const
{
  return -(p.a + p.d) / 2.0 - std::sqrt(discriminant(lambda));
}

WavenumberProfile WavenumberProfile::standard()
{
  WavenumberProfile p;
  for (int k = 1; k <= 7; ++k)
    p.breakpoints.push_back(0.5 * k);
  for (int k = 0; k <= 7; ++k)
    p.values.push_back(k % 2 == 0 ? 2.8 : 1.2);
  return p;
}

WavenumberProfile WavenumberProfile::constant(double kappa)
{
  WavenumberProfile p;
  p.values = {kappa};
  p.base = kappa;
  p.amplitude = 0.0;
  return p;
}

double WavenumberProfile::left(double x) const
{
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
  return values[static_cast<std::size_t>(it - breakpoints.begin())];
}

double WavenumberProfile::right(double x, double x1) const
{
  const double t = x - x1;
  return base + amplitude * std::exp(-decay * t) * std::sin(frequency * t);
}

void WavenumberProfile::validate() const
{
  if (values.size() != breakpoints.size() + 1)
    throw Error(ErrorKind::InvalidArgument,
                "wavenumber table needs one more value than breakpoints");
  if (!std::is_sorted(breakpoints.begin(), breakpoints.end()))
    throw Error(ErrorKind::InvalidArgument, "wavenumber breakpoints must be sorted");
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(values.begin(), values.end(), finite) ||
      !std::all_of(breakpoints.begin(), breakpoints.end(), finite) ||
      !std::isfinite(base) || !std::isfinite(amplitude) || !std::isfinite(decay) ||
      !std::isfinite(frequency))
    throw Error(ErrorKind::InvalidArgument, "wavenumber profile must be finite");
}

void HelmholtzConfig::validate() const
{
  if (!(x0 < x1 && x1 < x2))
    throw Error(ErrorKind::InvalidArgument, "Helmholtz domain needs x0 < x1 < x2");
  if (n < 3 || m < 3)
    throw Error(ErrorKind::InvalidArgument, "Helmholtz discretization needs n >= 3 and m >= 3");
  profile.validate();
}

HelmholtzProblem gen_helmholtz(const HelmholtzConfig &config)
{
  config.validate();
  const Eigen::Index n = config.n, m = config.m;
  const double h = (config.x1 - config.x0) / static_cast<double>(n - 1);

  std::vector<double> grid1(static_cast<std::size_t>(n)), kappa1(grid1.size());
  for (Eigen::Index j = 0; j < n; ++j)
  {
    grid1[j] = j == n - 1 ? config.x1 : config.x0 + h * static_cast<double>(j);
    kappa1[j] = config.profile.left(grid1[j]);
  }

  using Triplet = Eigen::Triplet<Complex>;
  std::vector<Triplet> t1, t2, t3;
  t1.reserve(static_cast<std::size_t>(3 * n));
  t1.emplace_back(0, 0, 1.0);
  const double ih2 = 1.0 / (h * h);
  for (Eigen::Index j = 1; j < n - 1; ++j)
  {
    t1.emplace_back(j, j - 1, ih2);
    t1.emplace_back(j, j, -2.0 * ih2 + kappa1[j] * kappa1[j]);
    t1.emplace_back(j, j + 1, ih2);
    t2.emplace_back(j, j, -1.0);
  }
  const Eigen::Index last = n - 1;
  t1.emplace_back(last, last, 3.0 / (2.0 * h));
  t1.emplace_back(last, last - 1, -4.0 / (2.0 * h));
  t1.emplace_back(last, last - 2, 1.0 / (2.0 * h));
  t3.emplace_back(last, last, -1.0);

  std::array<SparseMatrix, 3> a;
  for (auto &ak : a)
    ak.resize(n, n);
  a[0].setFromTriplets(t1.begin(), t1.end());
  a[1].setFromTriplets(t2.begin(), t2.end());
  a[2].setFromTriplets(t3.begin(), t3.end());

  std::vector<double> xi;
  Eigen::MatrixXd dxi;
  chebyshev(m, xi, dxi);
  const double len = config.x2 - config.x1;
  std::vector<double> grid2(static_cast<std::size_t>(m)), kappa2(grid2.size());
  for (Eigen::Index k = 0; k < m; ++k)
  {
    grid2[k] = config.x1 + 0.5 * (1.0 - xi[k]) * len;
    kappa2[k] = config.profile.right(grid2[k], config.x1);
  }
  grid2.front() = config.x1;
  grid2.back() = config.x2;
  const Eigen::MatrixXd dx = (-2.0 / len) * dxi;
  const Eigen::MatrixXd d2 = dx * dx;

  CMatrix b1 = d2.cast<Complex>();
  CMatrix b2 = CMatrix::Zero(m, m), b3 = CMatrix::Zero(m, m);
  for (Eigen::Index k = 1; k < m - 1; ++k)
  {
    b1(k, k) += kappa2[k] * kappa2[k];
    b2(k, k) = -1.0;
  }
  b1.row(0) = dx.row(0).cast<Complex>();
  b3(0, 0) = -1.0;
  b1.row(m - 1) = dx.row(m - 1).cast<Complex>();

  if (config.scaling)
  {
    const SparseMatrix a11 = a[0] + a[1] + a[2];
    CVector sa = CVector::Ones(n);
    for (Eigen::Index j = 0; j < n; ++j)
      if (const Complex dj = a11.coeff(j, j); std::abs(dj) > 0.0)
        sa(j) = 1.0 / dj;
    for (auto &ak : a)
      ak = sa.asDiagonal() * ak;
    const CMatrix b11 = b1 + b2 + b3;
    CVector sb = CVector::Ones(m);
    for (Eigen::Index k = 0; k < m; ++k)
      if (std::abs(b11(k, k)) > 0.0)
        sb(k) = 1.0 / b11(k, k);
    b1 = sb.asDiagonal() * b1;
    b2 = sb.asDiagonal() * b2;
    b3 = sb.asDiagonal() * b3;
  }

  std::array<CMatrix, 3> b{b1, b2, b3};
  CVector c = default_normalization(b);
  for (auto &ak : a)
    ak.makeCompressed();
  return HelmholtzProblem{
      TwoParProblem(std::move(a), std::move(b), std::move(c),
                    "helmholtz(n=" + std::to_string(n) + ",m=" + std::to_string(m) + ")"),
      config,
      std::move(grid1),
      std::move(grid2),
      std::move(kappa1),
      std::move(kappa2),
      dx.cast<Complex>()};
}

Eigenfunction reconstruct(const HelmholtzProblem &hp, const Quadruplet &q)
{
  const Eigen::Index n = hp.problem.n();
  if (q.x.size() != n || q.y.size() != hp.problem.m())
    throw Error(ErrorKind::DimensionMismatch, "quadruplet does not match the Helmholtz problem");
  const double h = hp.grid1[1] - hp.grid1[0];
  const CVector &x = q.x;
  const Complex u1 = x(n - 1);
  const Complex du1 = (3.0 * x(n - 1) - 4.0 * x(n - 2) + x(n - 3)) / (2.0 * h);
  const Complex y0 = q.y(0);
  const Complex dy0 = (hp.cheb_diff.row(0) * q.y)(0);

  Eigenfunction out;
  out.u1 = x;
  const double den = std::norm(y0) + std::norm(dy0);
  const Complex s = den > 0.0 ? (std::conj(y0) * u1 + std::conj(dy0) * du1) / den : Complex(0.0);
  out.u2 = s * q.y;
  const double value_scale = std::max(std::abs(u1), std::abs(s * y0));
  const double slope_scale = std::max(std::abs(du1), std::abs(s * dy0));
  const double value_gap = value_scale > 0.0 ? std::abs(u1 - s * y0) / value_scale : 0.0;
  const double slope_gap = slope_scale > 0.0 ? std::abs(du1 - s * dy0) / slope_scale : 0.0;
  out.interface_mismatch = std::max(value_gap, slope_gap);
  if (n >= 4)
  {
    const Complex d3 =
        (11.0 * x(n - 1) - 18.0 * x(n - 2) + 9.0 * x(n - 3) - 2.0 * x(n - 4)) / (6.0 * h);
    out.ratio_fd = d3 / u1;
  }
  else
  {
    out.ratio_fd = du1 / u1;
  }
  out.ratio_spectral = dy0 / y0;
  return out;
}

bool BranchTable::gap_before(std::size_t b, std::size_t k) const
{
  const int id = branch_ids.at(b);
  return std::any_of(gaps.begin(), gaps.end(),
                     [&](const Gap &g) { return g.branch_id == id && g.index == k; });
}

std::string BranchTable::to_csv() const
{
  std::ostringstream os;
  os.precision(17);
  os << "lambda_re,lambda_im";
  for (int id : branch_ids)
    os << ",g" << id << "_re,g" << id << "_im,g" << id << "_gap";
  os << '\n';
  for (std::size_t k = 0; k < lambda.size(); ++k)
  {
    os << lambda[k].real() << ',' << lambda[k].imag();
    for (std::size_t b = 0; b < branch_ids.size(); ++b)
      os << ',' << values[b][k].real() << ',' << values[b][k].imag() << ','
         << (gap_before(b, k) ? 1 : 0);
    os << '\n';
  }
  return os.str();
}

namespace
{

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_valid(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// A step that reverses direction through a large value: probe the midpoint
// on a copy of the tracking state. A pole shows up as a larger modulus (or a
// lost eigenvalue) there; a smooth zero crossing as a small one.
bool crosses_pole(const TwoParProblem &problem, const BranchState &before, int id, Complex left,
                  Complex right, Complex g_left, Complex g_right)
{
  const Complex jump = g_right - g_left;
  if ((g_left * std::conj(g_right)).real() >= 0.0 ||
      std::abs(jump) < 0.5 * (std::abs(g_left) + std::abs(g_right)))
    return false;
  BranchState probe = before;
  try
  {
    const BranchPoint mid = continue_branch(problem, probe, id, 0.5 * (left + right));
    return std::abs(mid.mu) > std::max(std::abs(g_left), std::abs(g_right));
  }
  catch (const Error &)
  {
    return true;
  }
}

}  // namespace

BranchTable tabulate_branches(const TwoParProblem &problem, std::span<const Complex> grid,
                              std::span<const int> branch_ids)
{
  if (grid.empty())
    throw Error(ErrorKind::InvalidArgument, "tabulation grid is empty");
  BranchTable table;
  table.lambda.assign(grid.begin(), grid.end());
  table.branch_ids.assign(branch_ids.begin(), branch_ids.end());
  table.values.assign(branch_ids.size(), std::vector<Complex>(grid.size(), Complex(kNaN, kNaN)));

  for (std::size_t b = 0; b < branch_ids.size(); ++b)
  {
    const int id = branch_ids[b];
    std::optional<BranchState> state;
    auto restart = [&](std::size_t k) {
      state.reset();
      try
      {
        BranchState s(problem, grid[k]);
        if (id >= 0 && id < s.branch_count())
        {
          table.values[b][k] = s.last_point(id).mu;
          state = std::move(s);
        }
      }
      catch (const Error &)
      {
      }
    };
    restart(0);
    for (std::size_t k = 1; k < grid.size(); ++k)
    {
      if (!state)
      {
        restart(k);
        if (state && k > 0)
          table.gaps.push_back({id, k, grid[k - 1], grid[k], "lost"});
        continue;
      }
      const BranchState before = *state;
      try
      {
        const BranchPoint bp = continue_branch(problem, *state, id, grid[k]);
        table.values[b][k] = bp.mu;
        const Complex prev = table.values[b][k - 1];
        if (is_valid(prev) &&
            crosses_pole(problem, before, id, grid[k - 1], grid[k], prev, bp.mu))
          table.gaps.push_back({id, k, grid[k - 1], grid[k], "pole"});
      }
      catch (const AmbiguousBranchError &)
      {
        table.gaps.push_back({id, k, grid[k - 1], grid[k], "ambiguous"});
        restart(k);
      }
      catch (const Error &)
      {
        table.gaps.push_back({id, k, grid[k - 1], grid[k], "lost"});
        restart(k);
      }
    }
  }
  return table;
}

}  // namespace mepnl
