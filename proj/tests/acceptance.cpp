// SPDX-License-Identifier: Apache-2.0

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "mepnl/core.hpp"
#include "mepnl/delta.hpp"
#include "mepnl/nep.hpp"
#include "mepnl/pencil.hpp"
#include "mepnl/problems.hpp"
#include "mepnl/solvers.hpp"
#include "support.hpp"

using namespace mepnl;
using mepnl::test::random_dense;
namespace fs = std::filesystem;

namespace
{

struct Outcome
{
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string &what)
  {
    if (!ok)
    {
      if (pass)
        detail << "failed: ";
      else
        detail << "; ";
      detail << what;
    }
    pass = pass && ok;
  }
};

std::string sci(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

// Every SolveTrace produced by the gate, for the B-equation check.
std::vector<SolveTrace> g_traces;

int branch_near(const TwoParProblem &p, Complex lambda, Complex mu)
{
  const BranchState s(p, lambda);
  int id = 0;
  for (int i = 1; i < s.branch_count(); ++i)
    if (std::abs(s.last_point(i).mu - mu) < std::abs(s.last_point(id).mu - mu))
      id = i;
  return id;
}

CVector perturb(const CVector &x, double amplitude, std::uint64_t seed)
{
  Eigen::Index imax = 0;
  x.cwiseAbs().maxCoeff(&imax);
  CVector out = x / x(imax);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Eigen::Index i = 0; i < out.size(); ++i)
    out(i) += amplitude * u(rng) * std::polar(1.0, 2.0 * std::numbers::pi * u(rng));
  return out;
}

TwoParProblem b_only(const CMatrix &b1, const CMatrix &b2, const CMatrix &b3, const CVector &c)
{
  SparseMatrix one(1, 1);
  one.insert(0, 0) = 1.0;
  return TwoParProblem({one, one, one}, {b1, b2, b3}, c);
}

// 1
void quadratic_branch(Outcome &o)
{
  const auto t0 = std::chrono::steady_clock::now();
  const TwoParProblem p = gen_qep(random_dense(5, 5, 1), random_dense(5, 5, 2), random_dense(5, 5, 3));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst_g = 0.0, worst_d = 0.0;
  for (int s = 0; s < 50; ++s)
  {
    const Complex l(u(rng), u(rng));
    const auto spec = eigenpairs_at(p, l, false);
    if (spec.branches.size() != 1)
    {
      o.require(false, "branch count " + std::to_string(spec.branches.size()));
      return;
    }
    const BranchPoint &bp = spec.branches[0];
    worst_g = std::max(worst_g, std::abs(bp.mu - l * l));
    const auto d = derivatives(p, bp, 5);
    worst_d = std::max({worst_d, std::abs(d.g[0] - 2.0 * l), std::abs(d.g[1] - 2.0),
                        std::abs(d.g[2]), std::abs(d.g[3]), std::abs(d.g[4])});
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.detail << "max|g-l^2| " << sci(worst_g) << ", max derivative error " << sci(worst_d) << ", "
           << sci(secs) << " s; ";
  o.require(worst_g <= 1e-12, "g");
  o.require(worst_d <= 1e-10, "derivatives");
  o.require(secs < 1.0, "runtime");
}

// 2
void oracle_equivalence(Outcome &o)
{
  const auto t0 = std::chrono::steady_clock::now();
  // |dlambda| is measured relative to max(1, |lambda|): the 1/500 scaling puts
  // some eigenvalues near 1e5, where an absolute 1e-8 is below the attainable
  // accuracy. The solve runs to 1e-13 for the same reason.
  double worst_res = 0.0, worst_dl = 0.0, worst_abs = 0.0;
  std::size_t count = 0, failed = 0;
  SolverConfig cfg;
  cfg.tol = 1e-13;
  for (std::uint64_t seed = 0; seed < 20; ++seed)
  {
    const Eigen::Index n = 3 + static_cast<Eigen::Index>(seed % 8);
    const Eigen::Index m = 1 + static_cast<Eigen::Index>(seed % 4);
    const TwoParProblem p = gen_random(n, m, 1000 + seed);
    const auto sol = delta_solve(p);
    o.require(sol.quadruplets.size() == static_cast<std::size_t>(n * m),
              "seed " + std::to_string(seed) + " returned " + std::to_string(sol.quadruplets.size()));
    for (std::size_t i = 0; i < sol.quadruplets.size(); ++i)
    {
      const Quadruplet &q = sol.quadruplets[i];
      worst_res = std::max({worst_res, q.residuals.res_a, q.residuals.res_b});
      const Complex start = q.lambda + 1e-3 * Complex(1.0, 1.0) / std::numbers::sqrt2;
      NepView nep(p, start, branch_near(p, start, q.mu));
      const auto r = augmented_newton(nep, cfg, start, perturb(q.x, 1e-3, seed * 100 + i));
      g_traces.push_back(r.trace);
      const double abs_dl = std::abs(r.quadruplet.lambda - q.lambda);
      const double dl = abs_dl / std::max(1.0, std::abs(q.lambda));
      worst_abs = std::max(worst_abs, abs_dl);
      worst_dl = std::max(worst_dl, dl);
      ++count;
      if (!r.trace.converged || dl > 1e-8)
        ++failed;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.detail << count << " quadruplets, max residual " << sci(worst_res)
           << ", max |dlambda|/max(1,|lambda|) " << sci(worst_dl) << " (absolute " << sci(worst_abs)
           << "), " << sci(secs) << " s; ";
  o.require(worst_res <= 1e-8, "residuals");
  o.require(failed == 0, std::to_string(failed) + " Newton runs did not reconverge");
  o.require(secs < 30.0, "runtime");
}

// 3
void companion_identity(Outcome &o)
{
  const CMatrix a1 = random_dense(5, 5, 21), a2 = random_dense(5, 5, 22), a3 = random_dense(5, 5, 23);
  const TwoParProblem p = gen_qep(a1, a2, a3);
  const DeltaPencil d = assemble_delta(p);
  const CMatrix z = CMatrix::Zero(5, 5);
  CMatrix d0(10, 10), d1(10, 10);
  d0 << a2, a3, a3, z;
  d1 << -a1, z, z, a3;
  const bool exact = d.delta0 == d0 && d.delta1 == d1;
  o.require(exact, "block form");
  const auto sol = delta_solve(p, d);
  const auto eigs = mepnl::test::qep_eigenvalues(a1, a2, a3);
  double worst = 0.0;
  std::vector<Complex> got;
  for (const auto &q : sol.quadruplets)
  {
    got.push_back(q.lambda);
    worst = std::max(worst, mepnl::test::nearest_distance(q.lambda, eigs) / std::max(1.0, std::abs(q.lambda)));
  }
  for (const Complex e : eigs)
    worst = std::max(worst, mepnl::test::nearest_distance(e, got) / std::max(1.0, std::abs(e)));
  o.detail << "block form " << (exact ? "exact" : "differs") << ", " << got.size() << "/"
           << eigs.size() << " eigenvalues, max distance " << sci(worst) << "; ";
  o.require(got.size() == eigs.size(), "eigenvalue count");
  o.require(worst <= 1e-8, "eigenvalues");
}

// 4
void sqrt_round_trip(Outcome &o)
{
  SqrtParams sp;
  sp.b = 2.0;
  sp.e = 2.0;
  sp.c = -1.0;
  sp.f = 1.0;
  const CMatrix a1 = random_dense(6, 6, 31), a2 = random_dense(6, 6, 32), a3 = random_dense(6, 6, 33);
  const TwoParProblem p = gen_sqrt_nep(a1, a2, a3, sp);
  const auto sol = delta_solve(p);
  double worst = 0.0;
  for (const auto &q : sol.quadruplets)
  {
    const Complex root = std::sqrt((2.0 + 2.0 * q.lambda) * (-1.0 + q.lambda));
    double best = std::numeric_limits<double>::infinity();
    for (const Complex g : {root, -root})
    {
      const double scale = (a1.norm() + std::abs(q.lambda) * a2.norm() + std::abs(g) * a3.norm()) * q.x.norm();
      best = std::min(best, ((a1 + q.lambda * a2 + g * a3) * q.x).norm() / scale);
    }
    worst = std::max(worst, best);
  }
  o.detail << sol.quadruplets.size() << " eigenpairs, max relative residual " << sci(worst) << "; ";
  o.require(sol.quadruplets.size() == 12, "eigenpair count");
  o.require(worst <= 1e-8, "residual");
}

// 5
void derivative_recursion(Outcome &o)
{
  const SqrtParams sp{3.0, 2.0, -1.0, -2.0, 2.0, 1.0};
  const TwoParProblem p = gen_sqrt_nep(random_dense(4, 4, 41), random_dense(4, 4, 42),
                                       random_dense(4, 4, 43), sp);
  const SqrtBranches br{sp};
  const Complex lambda = 0.3;
  double worst_fd = 0.0, worst_closed = 0.0;
  for (const auto &bp : eigenpairs_at(p, lambda).branches)
  {
    const bool plus = std::abs(bp.mu - br.plus(lambda)) < std::abs(bp.mu - br.minus(lambda));
    const std::function<Complex(Complex)> f = [&](Complex l) { return plus ? br.plus(l) : br.minus(l); };
    const auto d = derivatives(p, bp, 5);
    for (int k = 1; k <= 5; ++k)
      worst_fd = std::max(worst_fd, mepnl::test::relative_error(
                                        d.g[k - 1], mepnl::test::extrapolated_derivative(f, lambda, k, 0.2, 4)));
    worst_closed = std::max(worst_closed,
                            mepnl::test::relative_error(first_derivative_closed_form(p, bp), d.g[0]));
  }
  o.detail << "orders 1-5 max relative error " << sci(worst_fd) << ", closed form " << sci(worst_closed) << "; ";
  o.require(worst_fd <= 1e-6, "finite differences");
  o.require(worst_closed <= 1e-10, "closed form");
}

// 6
void jacobian_singularity(Outcome &o)
{
  CMatrix b1(2, 2);
  b1 << 0.0, 1.0, 0.0, 0.0;
  CVector c(2);
  c << 1.0, 0.3;
  const TwoParProblem jordan = b_only(b1, CMatrix::Zero(2, 2), CMatrix::Identity(2, 2), c);
  BranchPoint bp;
  bp.lambda = 0.7;
  bp.mu = 0.0;
  bp.y = CVector::Unit(2, 0);
  const double jordan_ratio = jacobian(jordan, bp).relative_sigma_min();

  double simple_min = std::numeric_limits<double>::infinity();
  std::size_t branches = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed)
  {
    const Eigen::Index m = 2 + static_cast<Eigen::Index>(seed % 4);
    const CMatrix b[3] = {random_dense(m, m, 3 * seed + 100), random_dense(m, m, 3 * seed + 101),
                          random_dense(m, m, 3 * seed + 102)};
    const TwoParProblem p = b_only(b[0], b[1], b[2], default_normalization({b[0], b[1], b[2]}));
    for (const auto &pt : eigenpairs_at(p, Complex(0.3, -0.2), false).branches)
    {
      simple_min = std::min(simple_min, jacobian(p, pt).relative_sigma_min());
      ++branches;
    }
  }
  o.detail << "Jordan " << sci(jordan_ratio) << ", simple min " << sci(simple_min) << " over "
           << branches << " branches; ";
  o.require(jordan_ratio <= 1e-12, "Jordan case");
  o.require(simple_min >= 1e-8, "simple case");
}

// 7
void convergence_shape(Outcome &o)
{
  const auto t0 = std::chrono::steady_clock::now();
  const TwoParProblem p = gen_random(500, 20, 2024);
  const Complex lambda0(0.15, 0.1);
  NepView ref_view(p, lambda0, 0);
  const auto ref = augmented_newton(ref_view, SolverConfig{}, lambda0,
                                    ref_view.solve_unchecked(lambda0, CVector::Ones(500)).normalized());
  g_traces.push_back(ref.trace);
  if (!ref.trace.converged)
  {
    o.require(false, "no nearby reference solution");
    return;
  }
  const CVector x0 = perturb(ref.quadruplet.x, 0.05, 7);

  NepView nep(p, lambda0, 0);
  const auto r = augmented_newton(nep, SolverConfig{}, lambda0, x0);
  g_traces.push_back(r.trace);
  const auto &its = r.trace.iterations;
  std::vector<double> gains;
  for (std::size_t k = 1; k < its.size(); ++k)
    gains.push_back(std::log10(its[k - 1].res_a / its[k].res_a));
  const std::size_t steps = its.size() - 1;
  bool increasing = gains.size() >= 3;
  for (std::size_t k = gains.size() >= 3 ? gains.size() - 2 : 0; increasing && k < gains.size(); ++k)
    increasing = gains[k] > gains[k - 1];
  o.detail << "Newton " << steps << " steps to " << sci(its.back().res_a) << ", last gains";
  for (std::size_t k = gains.size() >= 3 ? gains.size() - 3 : 0; k < gains.size(); ++k)
    o.detail << ' ' << sci(gains[k]);
  o.require(r.trace.converged && its.back().res_a <= 1e-10, "Newton did not converge");
  o.require(steps <= 15, "Newton steps");
  o.require(increasing, "digit gains not increasing");

  // shift 0.02 from the Newton solution; from lambda0 itself resinv settles on a
  // neighbouring eigenvalue
  SolverConfig rcfg;
  rcfg.sigma = r.quadruplet.lambda + 0.02 * Complex(1.0, 1.0) / std::numbers::sqrt2;
  rcfg.maxit = 100;
  NepView rnep(p, rcfg.sigma, branch_near(p, rcfg.sigma, r.quadruplet.mu));
  const auto rr = resinv(rnep, rcfg, x0);
  g_traces.push_back(rr.trace);
  // least-squares slope of log10 residual over the iterations after the first
  const auto &rits = rr.trace.iterations;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  for (std::size_t k = 1; k < rits.size(); ++k)
  {
    const double x = static_cast<double>(k), y = std::log10(rits[k].res_a);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  const double slope = cnt >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : 0.0;
  const double ratio = std::pow(10.0, slope);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.detail << "; resinv " << rits.size() - 1 << " steps to " << sci(rits.back().res_a)
           << ", fitted ratio " << sci(ratio) << ", |dlambda| vs Newton "
           << sci(std::abs(rr.quadruplet.lambda - r.quadruplet.lambda)) << ", " << sci(secs) << " s; ";
  o.require(cnt >= 2 && ratio < 0.9, "resinv ratio");
  o.require(rr.trace.converged && std::abs(rr.quadruplet.lambda - r.quadruplet.lambda) <= 1e-8,
            "resinv target");
  o.require(secs < 60.0, "runtime");
}

// 8
void b_exactness(Outcome &o)
{
  for (std::uint64_t seed = 0; seed < 5; ++seed)
  {
    const TwoParProblem p = gen_random(40, 5, 7000 + seed);
    NepView nep(p, Complex(0.1, 0.1), 0);
    g_traces.push_back(augmented_newton(nep, SolverConfig{}, Complex(0.1, 0.1), CVector::Ones(40)).trace);
    SolverConfig cfg;
    cfg.sigma = Complex(0.1, 0.1);
    cfg.maxit = 30;
    NepView rn(p, cfg.sigma, 0);
    g_traces.push_back(resinv(rn, cfg, CVector::Ones(40)).trace);
  }
  double worst = 0.0;
  std::size_t iterates = 0;
  for (const auto &t : g_traces)
    for (const auto &rec : t.iterations)
    {
      worst = std::max(worst, rec.res_b);
      ++iterates;
    }
  o.detail << iterates << " iterates over " << g_traces.size() << " traces, max resB " << sci(worst) << "; ";
  o.require(iterates > 0, "no iterates");
  o.require(worst <= 1e-10, "resB");
}

// 9
void conditioning_attainment(Outcome &o)
{
  const double eps = 1e-7;
  const TwoParProblem p = gen_random(6, 3, 41);
  const auto sol = delta_solve(p);
  Quadruplet q = sol.quadruplets.at(0);
  attach_left_vectors(p, q);
  const auto weights = ConditionWeights::relative(p, q.lambda);
  const auto rep = condition_numbers(p, q, weights);
  auto phase = [](Complex z) { return std::abs(z) == 0.0 ? Complex(1.0) : std::conj(z) / std::abs(z); };
  const CVector &v = *q.v, &w = *q.w;
  const CMatrix vx = v * q.x.adjoint() / (v.norm() * q.x.norm());
  const CMatrix wy = w * q.y.adjoint() / (w.norm() * q.y.norm());
  const Complex rot = phase(rep.vh_a3_x / rep.wh_b3_y);
  const Complex ph[3] = {1.0, phase(q.lambda), phase(q.mu)};
  std::array<SparseMatrix, 3> a;
  std::array<CMatrix, 3> b;
  for (int k = 0; k < 3; ++k)
  {
    a[k] = (CMatrix(p.a(k + 1)) - eps * weights.alpha[k] * ph[k] * vx).sparseView(0.0, 0.0);
    b[k] = p.b(k + 1) + eps * weights.beta[k] * rot * ph[k] * wy;
  }
  const auto moved = delta_solve(TwoParProblem(a, b, p.c()));
  double observed = std::numeric_limits<double>::infinity();
  for (const auto &s : moved.quadruplets)
    observed = std::min(observed, std::abs(s.lambda - q.lambda));
  const double predicted = eps * rep.kappa_total;
  const Complex product = rep.wh_b3_y * rep.vh_mprime_x;
  const double det_err = std::abs(c0_matrix(p, q).determinant() - product) / std::abs(product);
  o.detail << "observed " << sci(observed) << ", eps*kappa " << sci(predicted) << ", det(C0) error "
           << sci(det_err) << "; ";
  o.require(observed <= 2.0 * predicted && observed >= 0.5 * predicted, "attainment");
  o.require(det_err <= 1e-10, "det(C0)");
}

// 10
void helmholtz_sanity(Outcome &o)
{
  const auto t0 = std::chrono::steady_clock::now();
  auto solve = [](const TwoParProblem &p, Complex lambda0, double tol) {
    NepView nep(p, lambda0, 0);
    SolverConfig cfg;
    cfg.tol = tol;
    const auto r = augmented_newton(nep, cfg, lambda0,
                                    nep.solve_unchecked(lambda0, CVector::Ones(p.n())).normalized());
    g_traces.push_back(r.trace);
    return r;
  };

  // constant wavenumber 2, interface at 3.7 (off the nodes of the first three modes)
  auto s = [](int k) { return (k - 0.5) * std::numbers::pi / 5.0; };
  double err[2][3];
  for (int level = 0; level < 2; ++level)
  {
    HelmholtzConfig cfg;
    cfg.n = level == 0 ? 400 : 800;
    cfg.m = 20;
    cfg.x1 = 3.7;
    cfg.profile = WavenumberProfile::constant(2.0);
    const HelmholtzProblem hp = gen_helmholtz(cfg);
    for (int k = 1; k <= 3; ++k)
    {
      const double exact = 4.0 - s(k) * s(k);
      const auto r = solve(hp.problem, exact + 0.01, 1e-13);
      err[level][k - 1] = r.trace.converged ? std::abs(r.quadruplet.lambda - exact) : 1.0;
    }
  }
  const double worst = std::max({err[1][0], err[1][1], err[1][2]});
  const double ratio = err[0][2] / err[1][2];
  o.detail << "analytic error at n=800 " << sci(worst) << ", halving-h ratio (smallest) " << sci(ratio);
  o.require(worst <= 1e-3, "analytic eigenvalues");
  o.require(ratio > 3.5 && ratio < 4.5, "second order");

  const HelmholtzProblem hp = gen_helmholtz(HelmholtzConfig{});
  std::vector<Complex> grid;
  for (int k = 0; k <= 1100; ++k)
    grid.emplace_back(-10.0 + 0.1 * k, 0.0);
  const std::vector<int> ids{0};
  const BranchTable table = tabulate_branches(hp.problem, grid, ids);
  std::vector<std::pair<double, double>> singular;
  for (const auto &g : table.gaps)
    singular.emplace_back(grid[g.index - 1].real(), grid[g.index].real());
  o.detail << ", " << singular.size() << " flagged intervals";
  o.require(!singular.empty(), "no singularities flagged");

  double mismatch = 0.0;
  std::size_t on_singular = 0, converged = 0;
  for (const double l0 : {-5.0, 0.5, 2.0, 4.0, 6.0})
  {
    const auto r = solve(hp.problem, l0, 1e-12);
    if (!r.trace.converged)
      continue;
    ++converged;
    mismatch = std::max(mismatch, reconstruct(hp, r.quadruplet).interface_mismatch);
    const double l = r.quadruplet.lambda.real();
    for (const auto &[lo, hi] : singular)
      if (l >= lo && l <= hi)
        ++on_singular;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.detail << ", " << converged << " eigenvalues, interface mismatch " << sci(mismatch) << ", "
           << sci(secs) << " s; ";
  o.require(converged >= 3, "too few converged eigenvalues");
  o.require(mismatch <= 1e-6, "interface continuity");
  o.require(on_singular == 0, "eigenvalue on a flagged singularity");
  o.require(secs < 120.0, "runtime");
}

// 11
std::string without_timings(const fs::path &file)
{
  std::ifstream in(file);
  nlohmann::json j = nlohmann::json::parse(in);
  j.erase("timings");
  return j.dump();
}

int cli(const std::string &args)
{
  const std::string cmd = "\"" MEPNL_CLI_PATH "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void cli_determinism(Outcome &o)
{
  const fs::path root = fs::temp_directory_path() / "mepnl_acceptance";
  fs::remove_all(root);
  const std::vector<std::string> runs{
      "solve --gen random --n 200 --m 10 --seed 3 --lambda0 0.15+0.1i",
      "solve --gen random --n 200 --m 10 --seed 3 --solver resinv --lambda0 0.15+0.1i --maxit 40",
      "solve --gen random --n 12 --m 3 --seed 5 --solver delta",
      "cond --gen qep --lambda0 0.5+0.5i",
      "branches --gen sqrt --grid=-2:0.1:2 --branch 0 --branch 1"};
  std::size_t same = 0;
  for (std::size_t i = 0; i < runs.size(); ++i)
  {
    const fs::path a = root / (std::to_string(i) + "a"), b = root / (std::to_string(i) + "b");
    const int ca = cli(runs[i] + " --out " + a.string());
    const int cb = cli(runs[i] + " --out " + b.string());
    if (ca == cb && fs::exists(a / "results.json") && fs::exists(b / "results.json") &&
        without_timings(a / "results.json") == without_timings(b / "results.json"))
      ++same;
    else
      o.require(false, "'" + runs[i] + "' differs");
  }
  o.detail << same << "/" << runs.size() << " runs identical; ";
}

}  // namespace

int main()
{
  const std::vector<std::pair<std::string, std::function<void(Outcome &)>>> criteria{
      {"quadratic branch exactness", quadratic_branch},
      {"oracle equivalence", oracle_equivalence},
      {"companion linearization identity", companion_identity},
      {"square root round trip", sqrt_round_trip},
      {"derivative recursion vs finite differences", derivative_recursion},
      {"Jacobian singularity both directions", jacobian_singularity},
      {"desk-scale convergence shape", convergence_shape},
      {"B-equation exactness along iterations", b_exactness},
      {"conditioning attainment", conditioning_attainment},
      {"Helmholtz sanity", helmholtz_sanity},
      {"CLI determinism", cli_determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i)
  {
    Outcome o;
    try
    {
      criteria[i].second(o);
    }
    catch (const std::exception &e)
    {
      o.require(false, std::string("exception: ") + e.what());
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": "
              << o.detail.str() << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
