// SPDX-License-Identifier: Apache-2.0

#include "mepnl/core.hpp"

#include <cmath>

namespace mepnl
{

const char *to_string(ErrorKind kind)
{
  switch (kind)
  {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::MissingLeftVectors: return "MissingLeftVectors";
    case ErrorKind::NonSimple: return "NonSimple";
    case ErrorKind::AmbiguousBranch: return "AmbiguousBranch";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    case ErrorKind::ShiftIsEigenvalue: return "ShiftIsEigenvalue";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DegenerateProjection: return "DegenerateProjection";
    case ErrorKind::SingularProblem: return "SingularProblem";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

namespace
{

double frobenius(const SparseMatrix &a)
{
  double s = 0.0;
  for (Eigen::Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it)
      s += std::norm(it.value());
  return std::sqrt(s);
}

double safe_ratio(double num, double den)
{
  if (num == 0.0)
    return 0.0;
  return num / den;
}

}  // namespace

TwoParProblem::TwoParProblem(std::array<SparseMatrix, 3> a, std::array<CMatrix, 3> b, CVector c,
                             std::string label)
  : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), label_(std::move(label))
{
  const auto n = a_[0].rows();
  const auto m = b_[0].rows();
  std::string shapes;
  for (int k = 0; k < 3; ++k)
    shapes += " A" + std::to_string(k + 1) + "=" + std::to_string(a_[k].rows()) + "x" +
              std::to_string(a_[k].cols());
  for (int k = 0; k < 3; ++k)
    shapes += " B" + std::to_string(k + 1) + "=" + std::to_string(b_[k].rows()) + "x" +
              std::to_string(b_[k].cols());
  bool ok = n >= 1 && m >= 1;
  for (int k = 0; k < 3; ++k)
  {
    ok = ok && a_[k].rows() == n && a_[k].cols() == n;
    ok = ok && b_[k].rows() == m && b_[k].cols() == m;
  }
  if (!ok)
    throw Error(ErrorKind::DimensionMismatch, "inconsistent coefficient shapes:" + shapes);
  if (c_.size() != m)
    throw Error(ErrorKind::DimensionMismatch, "normalization vector c has length " +
                                                  std::to_string(c_.size()) + ", expected " +
                                                  std::to_string(m));
  if (c_.norm() == 0.0)
    throw Error(ErrorKind::InvalidArgument, "normalization vector c must be nonzero");
  for (int k = 0; k < 3; ++k)
  {
    a_[k].makeCompressed();
    a_norms_[k] = frobenius(a_[k]);
    b_norms_[k] = b_[k].norm();
  }
}

CVector TwoParProblem::apply_a(Complex lambda, Complex mu, const CVector &x) const
{
  CVector r = a_[0] * x;
  if (lambda != 0.0)
    r += lambda * (a_[1] * x);
  if (mu != 0.0)
    r += mu * (a_[2] * x);
  return r;
}

SparseMatrix TwoParProblem::a_matrix(Complex lambda, Complex mu) const
{
  SparseMatrix r = a_[0] + lambda * a_[1] + mu * a_[2];
  r.makeCompressed();
  return r;
}

CMatrix TwoParProblem::b_matrix(Complex lambda, Complex mu) const
{
  return b_[0] + lambda * b_[1] + mu * b_[2];
}

ResidualRecord residuals(const TwoParProblem &problem, const Quadruplet &q)
{
  if (q.x.size() != problem.n() || q.y.size() != problem.m())
    throw Error(ErrorKind::DimensionMismatch,
                "quadruplet vectors have sizes " + std::to_string(q.x.size()) + ", " +
                    std::to_string(q.y.size()) + " but the problem has n=" +
                    std::to_string(problem.n()) + ", m=" + std::to_string(problem.m()));
  const double la = std::abs(q.lambda), lm = std::abs(q.mu);
  ResidualRecord r;
  const double scale_a =
      (problem.a_norm(1) + la * problem.a_norm(2) + lm * problem.a_norm(3)) * q.x.norm();
  r.res_a = safe_ratio(problem.apply_a(q.lambda, q.mu, q.x).norm(), scale_a);
  const double scale_b =
      (problem.b_norm(1) + la * problem.b_norm(2) + lm * problem.b_norm(3)) * q.y.norm();
  r.res_b = safe_ratio((problem.b_matrix(q.lambda, q.mu) * q.y).norm(), scale_b);
  return r;
}

bool normalize_by_c(const CVector &c, CVector &y)
{
  const Complex cy = c.transpose() * y;
  if (std::abs(cy) > 1e-10 * c.norm() * y.norm())
  {
    y /= cy;
    return true;
  }
  y.normalize();
  return false;
}

namespace
{

void require_left_vectors(const TwoParProblem &problem, const Quadruplet &q)
{
  if (!q.v || !q.w)
    throw Error(ErrorKind::MissingLeftVectors,
                "left eigenvectors v and w are required; compute them with "
                "attach_left_vectors (nep) or take w from eigenpairs_at (pencil)");
  if (q.v->size() != problem.n() || q.w->size() != problem.m() || q.x.size() != problem.n() ||
      q.y.size() != problem.m())
    throw Error(ErrorKind::DimensionMismatch, "quadruplet vector sizes do not match the problem");
  if (q.v->norm() == 0.0 || q.w->norm() == 0.0)
    throw Error(ErrorKind::InvalidArgument, "left eigenvectors must be nonzero");
}

Complex form(const CVector &left, const SparseMatrix &a, const CVector &right)
{
  return left.dot(a * right);
}

Complex form(const CVector &left, const CMatrix &b, const CVector &right)
{
  return left.dot(b * right);
}

}  // namespace

Eigen::Matrix2cd c0_matrix(const TwoParProblem &problem, const Quadruplet &q)
{
  require_left_vectors(problem, q);
  const CVector &v = *q.v, &w = *q.w;
  Eigen::Matrix2cd c0;
  c0(0, 0) = form(v, problem.a(2), q.x);
  c0(0, 1) = form(v, problem.a(3), q.x);
  c0(1, 0) = form(w, problem.b(2), q.y);
  c0(1, 1) = form(w, problem.b(3), q.y);
  return c0;
}

ConditionWeights ConditionWeights::absolute()
{
  return ConditionWeights{};
}

ConditionWeights ConditionWeights::relative(const TwoParProblem &problem, Complex lambda)
{
  ConditionWeights w;
  for (int k = 1; k <= 3; ++k)
  {
    w.alpha[k - 1] = problem.a_norm(k);
    w.beta[k - 1] = problem.b_norm(k);
  }
  w.gamma = std::abs(lambda);
  return w;
}

ConditionReport condition_numbers(const TwoParProblem &problem, const Quadruplet &q,
                                  const ConditionWeights &weights)
{
  require_left_vectors(problem, q);
  const CVector &v = *q.v, &w = *q.w, &x = q.x, &y = q.y;
  const double la = std::abs(q.lambda), lg = std::abs(q.mu);

  ConditionReport r;
  r.weights = weights;
  r.wh_b3_y = form(w, problem.b(3), y);
  if (std::abs(r.wh_b3_y) <= 1e-12 * w.norm() * y.norm() * problem.b_norm(3))
    throw Error(ErrorKind::NonSimple, "w^H B3 y vanishes; mu is not a simple eigenvalue of the "
                                      "B pencil and the condition number is undefined");
  const Complex wh_b2_y = form(w, problem.b(2), y);
  r.g_prime = -wh_b2_y / r.wh_b3_y;

  const Complex vh_a2_x = form(v, problem.a(2), x);
  r.vh_a3_x = form(v, problem.a(3), x);
  r.vh_mprime_x = vh_a2_x + r.g_prime * r.vh_a3_x;
  const double mprime_scale = problem.a_norm(2) + std::abs(r.g_prime) * problem.a_norm(3);
  if (std::abs(r.vh_mprime_x) <= 1e-12 * v.norm() * x.norm() * mprime_scale)
    throw Error(ErrorKind::NonSimple,
                "v^H M'(lambda) x vanishes; lambda is not a simple eigenvalue of the NEP");

  const auto &al = weights.alpha;
  const auto &be = weights.beta;
  r.kappa_a = v.norm() * x.norm() * (al[0] + la * al[1] + lg * al[2]) / std::abs(r.vh_mprime_x);
  r.kappa_g_b = w.norm() * y.norm() * (be[0] + la * be[1] + lg * be[2]) / std::abs(r.wh_b3_y);
  r.kappa_g_lambda = weights.gamma * std::abs(wh_b2_y) / std::abs(r.wh_b3_y);
  const double coupling = std::abs(r.vh_a3_x) / std::abs(r.vh_mprime_x);
  r.kappa_total = r.kappa_a + r.kappa_g_b * coupling;
  r.det_c0 = vh_a2_x * r.wh_b3_y - r.vh_a3_x * wh_b2_y;
  r.backward_lambda_bound =
      w.norm() * y.norm() * (be[0] + lg * be[2]) / std::abs(r.wh_b3_y) * coupling;
  r.theta2_absolute = 1.0 + la + lg;
  r.theta2_relative = problem.b_norm(1) + la * problem.b_norm(2) + lg * problem.b_norm(3);
  return r;
}

}  // namespace mepnl
