// SPDX-License-Identifier: Apache-2.0

#include "mepnl/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "mepnl/delta.hpp"
#include "mepnl/matrix_market.hpp"

namespace mepnl
{

using nlohmann::json;

namespace
{

constexpr int kSchemaVersion = 1;

json cjson(Complex z) { return json::array({z.real(), z.imag()}); }

json vjson(const CVector &v)
{
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back(cjson(v(i)));
  return out;
}

Complex from_cjson(const json &j)
{
  if (j.is_number())
    return {j.get<double>(), 0.0};
  if (j.is_string())
    return parse_complex(j.get<std::string>());
  if (j.is_array() && j.size() == 2)
    return {j[0].get<double>(), j[1].get<double>()};
  throw Error(ErrorKind::Parse, "expected a complex number, got " + j.dump());
}

CMatrix normal_dense(std::mt19937_64 &rng, Eigen::Index n)
{
  std::normal_distribution<double> dist;
  CMatrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      a(i, j) = dist(rng);
  return a;
}

void write_text(const std::filesystem::path &path, const std::string &text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  out << text;
  if (!out)
    throw Error(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

json quadruplet_json(const Quadruplet &q)
{
  return json{{"lambda", cjson(q.lambda)},
              {"mu", cjson(q.mu)},
              {"res_a", q.residuals.res_a},
              {"res_b", q.residuals.res_b},
              {"c_normalized", q.c_normalized},
              {"x", vjson(q.x)},
              {"y", vjson(q.y)}};
}

json condition_json(const ConditionReport &r)
{
  return json{{"kappa_a", r.kappa_a},
              {"kappa_g_b", r.kappa_g_b},
              {"kappa_g_lambda", r.kappa_g_lambda},
              {"kappa_total", r.kappa_total},
              {"det_c0", cjson(r.det_c0)},
              {"backward_lambda_bound", r.backward_lambda_bound},
              {"theta2_absolute", r.theta2_absolute},
              {"theta2_relative", r.theta2_relative},
              {"g_prime", cjson(r.g_prime)}};
}

json trace_json(const SolveTrace &t)
{
  json its = json::array();
  for (const auto &r : t.iterations)
    its.push_back(json{{"k", r.k},
                       {"lambda", cjson(r.lambda)},
                       {"mu", cjson(r.mu)},
                       {"res_a", r.res_a},
                       {"res_b", r.res_b},
                       {"step", cjson(r.step)}});
  return json{{"iterations", its},
              {"converged", t.converged},
              {"termination", t.termination},
              {"factorizations", t.factorizations}};
}

std::string trace_csv(const SolveTrace &t)
{
  std::ostringstream os;
  os.precision(17);
  os << "iteration,res_a,res_b,lambda_re,lambda_im\n";
  for (const auto &r : t.iterations)
    os << r.k << ',' << r.res_a << ',' << r.res_b << ',' << r.lambda.real() << ','
       << r.lambda.imag() << '\n';
  return os.str();
}

json config_json(const RunConfig &c)
{
  json src{{"seed", c.source.seed}};
  if (!c.source.generator.empty())
    src["generator"] = c.source.generator;
  if (c.source.n)
    src["n"] = *c.source.n;
  if (c.source.m)
    src["m"] = *c.source.m;
  if (!c.source.matrix_files.empty())
    src["matrix_files"] = c.source.matrix_files;
  if (!c.source.c_file.empty())
    src["c_file"] = c.source.c_file;
  json j{{"command", c.command}, {"source", src},         {"solver", c.solver},
         {"tol", c.tol},         {"maxit", c.maxit},      {"lambda0", cjson(c.lambda0)},
         {"branches", c.branches}};
  if (c.sigma)
    j["sigma"] = cjson(*c.sigma);
  if (!c.x0_file.empty())
    j["x0_file"] = c.x0_file;
  if (c.grid)
    j["grid"] = json{{"start", c.grid->start}, {"step", c.grid->step}, {"stop", c.grid->stop}};
  return j;
}

struct Solved
{
  std::vector<Quadruplet> quadruplets;
  std::optional<SolveTrace> trace;
  std::vector<DeltaWarning> warnings;
  std::vector<double> seconds;
};

SolverConfig solver_config(const RunConfig &config)
{
  SolverConfig s;
  s.tol = config.tol;
  s.maxit = config.maxit;
  s.branch_id = config.branches.empty() ? 0 : config.branches.front();
  s.sigma = config.sigma.value_or(config.lambda0);
  return s;
}

CVector start_vector(const RunConfig &config, Eigen::Index n)
{
  CVector x0 = read_vector_market(config.x0_file);
  if (x0.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "x0 file has length " + std::to_string(x0.size()) +
                                                  ", expected " + std::to_string(n));
  return x0;
}

Solved solve_problem(const RunConfig &config, const TwoParProblem &problem)
{
  Solved out;
  if (config.solver == "delta")
  {
    auto sol = delta_solve(problem);
    out.quadruplets = std::move(sol.quadruplets);
    out.warnings = std::move(sol.warnings);
    return out;
  }
  SolverConfig s = solver_config(config);
  SolveResult r;
  if (config.solver == "newton")
  {
    NepView nep(problem, config.lambda0, s.branch_id);
    CVector x0;
    if (!config.x0_file.empty())
      x0 = start_vector(config, problem.n());
    else
      x0 = nep.solve_unchecked(config.lambda0, CVector::Ones(problem.n())).normalized();
    r = augmented_newton(nep, s, config.lambda0, x0);
  }
  else
  {
    NepView nep(problem, s.sigma, s.branch_id);
    const CVector x0 = config.x0_file.empty()
                           ? CVector(CVector::Ones(problem.n()).normalized())
                           : start_vector(config, problem.n());
    r = resinv(nep, s, x0);
  }
  for (const auto &rec : r.trace.iterations)
    out.seconds.push_back(rec.seconds);
  out.quadruplets.push_back(std::move(r.quadruplet));
  out.trace = std::move(r.trace);
  return out;
}

json conditioning(const TwoParProblem &problem, Quadruplet &q, bool both)
{
  try
  {
    attach_left_vectors(problem, q);
    json j{{"relative",
            condition_json(condition_numbers(problem, q, ConditionWeights::relative(problem,
                                                                                   q.lambda)))}};
    if (both)
      j["absolute"] = condition_json(condition_numbers(problem, q, ConditionWeights::absolute()));
    return j;
  }
  catch (const Error &e)
  {
    return json{{"error", to_string(e.kind())}, {"message", e.what()}};
  }
}

}  // namespace

int exit_code_for(ErrorKind kind)
{
  switch (kind)
  {
  case ErrorKind::NoConvergence:
    return kExitNotConverged;
  case ErrorKind::NonSimple:
  case ErrorKind::AmbiguousBranch:
  case ErrorKind::SingularJacobian:
  case ErrorKind::ShiftIsEigenvalue:
  case ErrorKind::DegenerateProjection:
  case ErrorKind::SingularProblem:
    return kExitSingular;
  case ErrorKind::Io:
  case ErrorKind::Parse:
    return kExitIo;
  case ErrorKind::TooLarge:
    return kExitCap;
  case ErrorKind::DimensionMismatch:
  case ErrorKind::InvalidArgument:
  case ErrorKind::MissingLeftVectors:
    return kExitUsage;
  }
  return kExitUsage;
}

std::vector<Complex> GridSpec::points() const
{
  if (!(step != 0.0) || !std::isfinite(start) || !std::isfinite(step) || !std::isfinite(stop) ||
      (stop - start) / step < 0.0)
    throw Error(ErrorKind::InvalidArgument, "grid start:step:stop does not describe a range");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<Complex> out(count);
  for (std::size_t k = 0; k < count; ++k)
    out[k] = start + static_cast<double>(k) * step;
  return out;
}

void RunConfig::validate() const
{
  static const char *commands[] = {"solve", "branches", "cond", "generate", "check"};
  if (std::find(std::begin(commands), std::end(commands), command) == std::end(commands))
    throw Error(ErrorKind::InvalidArgument, "unknown command '" + command + "'");
  if (solver != "newton" && solver != "resinv" && solver != "delta")
    throw Error(ErrorKind::InvalidArgument, "unknown solver '" + solver + "'");
  const bool generated = !source.generator.empty();
  const bool files = !source.matrix_files.empty();
  if (generated == files)
    throw Error(ErrorKind::InvalidArgument,
                "give exactly one problem source: a generator or six matrix files");
  if (files && source.matrix_files.size() != 6)
    throw Error(ErrorKind::InvalidArgument, "expected six matrix files A1,A2,A3,B1,B2,B3");
  if (!(tol > 0.0) || maxit < 1)
    throw Error(ErrorKind::InvalidArgument, "need tol > 0 and maxit >= 1");
  if (command == "branches" && !grid)
    throw Error(ErrorKind::InvalidArgument, "branches needs --grid start:step:stop");
  if (branches.empty())
    throw Error(ErrorKind::InvalidArgument, "at least one branch id is required");
}

Complex parse_complex(const std::string &raw)
{
  std::string s;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch)))
      s += ch;
  auto number = [&](const std::string &t) {
    if (t.empty() || t == "+")
      return 1.0;
    if (t == "-")
      return -1.0;
    std::size_t used = 0;
    double v = 0.0;
    try
    {
      v = std::stod(t, &used);
    }
    catch (const std::exception &)
    {
      used = 0;
    }
    if (used != t.size())
      throw Error(ErrorKind::InvalidArgument, "cannot parse complex number '" + raw + "'");
    return v;
  };
  if (s.empty())
    throw Error(ErrorKind::InvalidArgument, "empty complex number");
  if (s.back() != 'i' && s.back() != 'j')
    return {number(s), 0.0};
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E')
    {
      split = k;
      break;
    }
  if (split == std::string::npos)
    return {0.0, number(s)};
  return {number(s.substr(0, split)), number(s.substr(split))};
}

GridSpec parse_grid(const std::string &text)
{
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');)
    parts.push_back(p);
  if (parts.size() != 3)
    throw Error(ErrorKind::InvalidArgument, "grid must be start:step:stop, got '" + text + "'");
  GridSpec g;
  try
  {
    g.start = std::stod(parts[0]);
    g.step = std::stod(parts[1]);
    g.stop = std::stod(parts[2]);
  }
  catch (const std::exception &)
  {
    throw Error(ErrorKind::InvalidArgument, "grid must be start:step:stop, got '" + text + "'");
  }
  g.points();
  return g;
}

LoadedProblem load_problem(const ProblemSource &source)
{
  LoadedProblem out;
  if (!source.matrix_files.empty())
  {
    if (source.matrix_files.size() != 6)
      throw Error(ErrorKind::InvalidArgument, "expected six matrix files A1,A2,A3,B1,B2,B3");
    std::array<SparseMatrix, 3> a;
    std::array<CMatrix, 3> b;
    for (int k = 0; k < 3; ++k)
    {
      a[k] = read_matrix_market(source.matrix_files[k]);
      b[k] = CMatrix(read_matrix_market(source.matrix_files[k + 3]));
    }
    bool square_b = true;
    for (const auto &bk : b)
      square_b = square_b && bk.rows() == b[0].rows() && bk.cols() == b[0].rows();
    CVector c = !source.c_file.empty() ? read_vector_market(source.c_file)
                : square_b             ? default_normalization(b)
                                       : CVector::Ones(b[0].rows());
    out.problem.emplace(std::move(a), std::move(b), std::move(c), "files");
    return out;
  }
  const std::string &g = source.generator;
  std::mt19937_64 rng(source.seed);
  if (g == "random")
    out.problem.emplace(gen_random(source.n.value_or(20), source.m.value_or(4), source.seed));
  else if (g == "qep")
  {
    const Eigen::Index n = source.n.value_or(5);
    const CMatrix a1 = normal_dense(rng, n), a2 = normal_dense(rng, n), a3 = normal_dense(rng, n);
    out.problem.emplace(gen_qep(a1, a2, a3));
  }
  else if (g == "sqrt")
  {
    const Eigen::Index n = source.n.value_or(6);
    const CMatrix a1 = normal_dense(rng, n), a2 = normal_dense(rng, n), a3 = normal_dense(rng, n);
    out.problem.emplace(gen_sqrt_nep(a1, a2, a3, SqrtParams{3.0, 2.0, -1.0, -2.0, 2.0, 1.0}));
  }
  else if (g == "helmholtz")
  {
    HelmholtzConfig hc;
    hc.n = source.n.value_or(hc.n);
    hc.m = source.m.value_or(hc.m);
    out.helmholtz.emplace(gen_helmholtz(hc));
  }
  else
    throw Error(ErrorKind::InvalidArgument, "unknown generator '" + g + "'");
  return out;
}

std::string to_json_text(const RunConfig &config)
{
  json j = config_json(config);
  j["out"] = config.out_dir;
  return j.dump(2);
}

RunConfig config_from_json_text(const std::string &text)
{
  json j;
  try
  {
    j = json::parse(text);
  }
  catch (const json::exception &e)
  {
    throw Error(ErrorKind::Parse, std::string("config: ") + e.what());
  }
  RunConfig c;
  try
  {
    c.command = j.value("command", c.command);
    c.solver = j.value("solver", c.solver);
    c.tol = j.value("tol", c.tol);
    c.maxit = j.value("maxit", c.maxit);
    if (j.contains("lambda0"))
      c.lambda0 = from_cjson(j["lambda0"]);
    if (j.contains("sigma"))
      c.sigma = from_cjson(j["sigma"]);
    if (j.contains("branches"))
      c.branches = j["branches"].get<std::vector<int>>();
    c.x0_file = j.value("x0_file", c.x0_file);
    c.out_dir = j.value("out", c.out_dir);
    if (j.contains("grid"))
    {
      const auto &g = j["grid"];
      c.grid = g.is_string() ? parse_grid(g.get<std::string>())
                             : GridSpec{g.at("start").get<double>(), g.at("step").get<double>(),
                                        g.at("stop").get<double>()};
    }
    if (j.contains("source"))
    {
      const auto &s = j["source"];
      c.source.generator = s.value("generator", std::string{});
      if (s.contains("n"))
        c.source.n = s["n"].get<Eigen::Index>();
      if (s.contains("m"))
        c.source.m = s["m"].get<Eigen::Index>();
      c.source.seed = s.value("seed", c.source.seed);
      if (s.contains("matrix_files"))
        c.source.matrix_files = s["matrix_files"].get<std::vector<std::string>>();
      c.source.c_file = s.value("c_file", std::string{});
    }
  }
  catch (const json::exception &e)
  {
    throw Error(ErrorKind::Parse, std::string("config: ") + e.what());
  }
  return c;
}

int run(const RunConfig &config, std::string *message)
{
  const auto t0 = std::chrono::steady_clock::now();
  json results{{"schema_version", kSchemaVersion}, {"config", config_json(config)}};
  json timings = json::object();
  namespace fs = std::filesystem;
  const fs::path out_dir(config.out_dir);
  std::vector<std::pair<std::string, std::string>> extra_files;
  int code = kExitOk;

  auto finish = [&](bool partial) {
    timings["total_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    results["partial"] = partial;
    results["exit_code"] = code;
    results["timings"] = timings;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
      throw Error(ErrorKind::Io, "cannot create '" + out_dir.string() + "': " + ec.message());
    for (const auto &[name, text] : extra_files)
      write_text(out_dir / name, text);
    write_text(out_dir / "results.json", results.dump(2) + "\n");
  };

  try
  {
    config.validate();
    const LoadedProblem loaded = load_problem(config.source);
    const TwoParProblem &problem = loaded.get();
    results["problem"] = json{{"label", problem.label()}, {"n", problem.n()}, {"m", problem.m()}};

    if (config.command == "solve" || config.command == "cond")
    {
      Solved s = solve_problem(config, problem);
      json qs = json::array();
      for (auto &q : s.quadruplets)
      {
        json jq = quadruplet_json(q);
        jq["conditioning"] = conditioning(problem, q, config.command == "cond");
        qs.push_back(std::move(jq));
      }
      results["quadruplets"] = qs;
      if (s.trace)
      {
        results["trace"] = trace_json(*s.trace);
        results["converged"] = s.trace->converged;
        timings["iteration_seconds"] = s.seconds;
        extra_files.emplace_back("trace.csv", trace_csv(*s.trace));
        if (!s.trace->converged)
          code = kExitNotConverged;
      }
      else
      {
        results["converged"] = true;
        json warnings = json::array();
        for (const auto &w : s.warnings)
          warnings.push_back(json{{"lambda", cjson(w.lambda)}, {"reason", w.reason}});
        results["warnings"] = warnings;
      }
    }
    else if (config.command == "branches")
    {
      const auto grid = config.grid->points();
      const BranchTable table = tabulate_branches(problem, grid, config.branches);
      json gaps = json::array();
      for (const auto &g : table.gaps)
        gaps.push_back(json{{"branch", g.branch_id},
                            {"index", g.index},
                            {"left", cjson(g.left)},
                            {"right", cjson(g.right)},
                            {"reason", g.reason}});
      results["branches"] = json{{"ids", table.branch_ids}, {"points", grid.size()}, {"gaps", gaps}};
      extra_files.emplace_back("branches.csv", table.to_csv());
    }
    else if (config.command == "generate")
    {
      std::error_code ec;
      fs::create_directories(out_dir, ec);
      if (ec)
        throw Error(ErrorKind::Io, "cannot create '" + out_dir.string() + "': " + ec.message());
      json files = json::array();
      for (int k = 1; k <= 3; ++k)
      {
        const std::string a = "A" + std::to_string(k) + ".mtx";
        const std::string b = "B" + std::to_string(k) + ".mtx";
        write_matrix_market((out_dir / a).string(), problem.a(k));
        write_matrix_market((out_dir / b).string(), problem.b(k));
        files.push_back(a);
        files.push_back(b);
      }
      write_matrix_market((out_dir / "c.mtx").string(), CMatrix(problem.c()));
      files.push_back("c.mtx");
      results["files"] = files;
    }
    else
    {
      json norms{{"a", {problem.a_norm(1), problem.a_norm(2), problem.a_norm(3)}},
                 {"b", {problem.b_norm(1), problem.b_norm(2), problem.b_norm(3)}}};
      const auto spec = eigenpairs_at(problem, config.lambda0, false);
      json mus = json::array();
      for (const auto &bp : spec.branches)
        mus.push_back(cjson(bp.mu));
      results["check"] = json{{"norms", norms},
                              {"nnz", {problem.a(1).nonZeros(), problem.a(2).nonZeros(),
                                       problem.a(3).nonZeros()}},
                              {"finite_branches", spec.branches.size()},
                              {"infinite_eigenvalues", spec.infinite.size()},
                              {"branch_values", mus}};
    }
    finish(false);
    if (message)
      *message = code == kExitOk ? "ok" : "not converged";
    return code;
  }
  catch (const Error &e)
  {
    code = exit_code_for(e.kind());
    if (message)
      *message = std::string(to_string(e.kind())) + ": " + e.what();
    if (code == kExitNotConverged || code == kExitSingular)
    {
      results["error"] = json{{"kind", to_string(e.kind())}, {"message", e.what()}};
      if (const auto *amb = dynamic_cast<const AmbiguousBranchError *>(&e))
        results["error"]["lambda"] = cjson(amb->lambda());
      extra_files.clear();
      try
      {
        finish(true);
      }
      catch (const Error &)
      {
        code = kExitIo;
      }
    }
    return code;
  }
}

}  // namespace mepnl
