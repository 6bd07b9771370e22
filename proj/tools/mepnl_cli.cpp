// SPDX-License-Identifier: Apache-2.0

// mepnl: two-parameter eigenvalue problems through their nonlinearized form.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mepnl/run.hpp"

namespace
{

std::vector<std::string> split_list(const std::string &s)
{
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty())
      out.push_back(item);
  return out;
}

struct Flags
{
  std::string config_file;
  std::string gen;
  long n = 0, m = 0;
  std::uint64_t seed = 1;
  std::string solver;
  std::vector<int> branches;
  std::string lambda0, sigma;
  std::string x0_file;
  double tol = 0.0;
  int maxit = 0;
  std::string grid;
  std::string out;
  std::string matrix_files;
  std::string c_file;
};

void add_options(CLI::App *sub, Flags &f)
{
  sub->add_option("--config", f.config_file, "JSON run configuration; flags override it");
  sub->add_option("--gen", f.gen, "generator: random, qep, sqrt, helmholtz");
  sub->add_option("--n", f.n, "size of the A equation");
  sub->add_option("--m", f.m, "size of the B equation");
  sub->add_option("--seed", f.seed, "generator seed");
  sub->add_option("--solver", f.solver, "newton, resinv or delta");
  sub->add_option("--branch", f.branches, "branch id(s) in |mu| order at the start point");
  sub->add_option("--lambda0", f.lambda0, "start value, e.g. 0.15+0.1i");
  sub->add_option("--x0-file", f.x0_file, "start vector (Matrix Market)");
  sub->add_option("--sigma", f.sigma, "resinv shift (defaults to lambda0)");
  sub->add_option("--tol", f.tol, "relative residual tolerance");
  sub->add_option("--maxit", f.maxit, "iteration limit");
  sub->add_option("--grid", f.grid, "lambda grid start:step:stop");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--matrix-files", f.matrix_files, "A1,A2,A3,B1,B2,B3 Matrix Market files");
  sub->add_option("--c-file", f.c_file, "normalization vector c (Matrix Market)");
}

mepnl::RunConfig build_config(const std::string &command, const CLI::App &sub, const Flags &f)
{
  mepnl::RunConfig c;
  if (!f.config_file.empty())
  {
    std::ifstream in(f.config_file);
    if (!in)
      throw mepnl::Error(mepnl::ErrorKind::Io, "cannot open '" + f.config_file + "'");
    std::stringstream text;
    text << in.rdbuf();
    c = mepnl::config_from_json_text(text.str());
  }
  c.command = command;
  auto given = [&](const char *name) { return sub.count(name) > 0; };
  if (given("--gen"))
  {
    c.source.generator = f.gen;
    c.source.matrix_files.clear();
  }
  if (given("--matrix-files"))
  {
    c.source.matrix_files = split_list(f.matrix_files);
    c.source.generator.clear();
  }
  if (given("--c-file"))
    c.source.c_file = f.c_file;
  if (given("--n"))
    c.source.n = f.n;
  if (given("--m"))
    c.source.m = f.m;
  if (given("--seed"))
    c.source.seed = f.seed;
  if (given("--solver"))
    c.solver = f.solver;
  if (given("--branch"))
    c.branches = f.branches;
  if (given("--lambda0"))
    c.lambda0 = mepnl::parse_complex(f.lambda0);
  if (given("--sigma"))
    c.sigma = mepnl::parse_complex(f.sigma);
  if (given("--x0-file"))
    c.x0_file = f.x0_file;
  if (given("--tol"))
    c.tol = f.tol;
  if (given("--maxit"))
    c.maxit = f.maxit;
  if (given("--grid"))
    c.grid = mepnl::parse_grid(f.grid);
  if (given("--out"))
    c.out_dir = f.out;
  return c;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Two-parameter eigenvalue problems via nonlinearization"};
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<const char *, const char *>> commands{
      {"solve", "compute eigenvalues with newton, resinv or delta"},
      {"branches", "tabulate g_i(lambda) on a grid"},
      {"cond", "solve and report condition numbers"},
      {"generate", "write a generated problem as Matrix Market files"},
      {"check", "load and validate a problem"}};
  std::vector<CLI::App *> subs;
  for (const auto &[name, help] : commands)
  {
    auto *sub = app.add_subcommand(name, help);
    add_options(sub, flags);
    subs.push_back(sub);
  }
  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? mepnl::kExitOk : mepnl::kExitUsage;
  }

  for (auto *sub : subs)
  {
    if (!sub->parsed())
      continue;
    try
    {
      const mepnl::RunConfig config = build_config(sub->get_name(), *sub, flags);
      std::string message;
      const int code = mepnl::run(config, &message);
      (code == 0 ? std::cout : std::cerr) << sub->get_name() << ": " << message << '\n';
      return code;
    }
    catch (const mepnl::Error &e)
    {
      std::cerr << sub->get_name() << ": " << mepnl::to_string(e.kind()) << ": " << e.what()
                << '\n';
      return mepnl::exit_code_for(e.kind());
    }
  }
  return mepnl::kExitUsage;
}
