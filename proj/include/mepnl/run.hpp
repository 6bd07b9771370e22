// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mepnl/problems.hpp"
#include "mepnl/solvers.hpp"

namespace mepnl
{

enum ExitCode : int
{
  kExitOk = 0,
  kExitUsage = 1,
  kExitNotConverged = 2,
  kExitSingular = 3,
  kExitIo = 4,
  kExitCap = 5,
};

int exit_code_for(ErrorKind kind);

struct ProblemSource
{
  std::string generator;  // random | qep | sqrt | helmholtz; empty when reading files
  std::optional<Eigen::Index> n;
  std::optional<Eigen::Index> m;
  std::uint64_t seed = 1;
  std::vector<std::string> matrix_files;  // A1, A2, A3, B1, B2, B3
  std::string c_file;
};

struct GridSpec
{
  double start = 0.0;
  double step = 1.0;
  double stop = 0.0;

  std::vector<Complex> points() const;
};

struct RunConfig
{
  std::string command = "solve";  // solve | branches | cond | generate | check
  ProblemSource source;
  std::string solver = "newton";  // newton | resinv | delta
  double tol = 1e-10;
  int maxit = 100;
  Complex lambda0{};
  std::optional<Complex> sigma;  // resinv shift, defaults to lambda0
  std::vector<int> branches{0};
  std::string x0_file;
  std::optional<GridSpec> grid;
  std::string out_dir = ".";

  void validate() const;
};

// "a", "bi", "a+bi", "a-bi" with optional exponents; 'j' is accepted for 'i'.
Complex parse_complex(const std::string &text);
GridSpec parse_grid(const std::string &text);

struct LoadedProblem
{
  std::optional<TwoParProblem> problem;
  std::optional<HelmholtzProblem> helmholtz;

  const TwoParProblem &get() const { return helmholtz ? helmholtz->problem : *problem; }
};

LoadedProblem load_problem(const ProblemSource &source);

std::string to_json_text(const RunConfig &config);
RunConfig config_from_json_text(const std::string &text);

// Executes the command and writes results.json (plus trace.csv / branches.csv
// where applicable) into config.out_dir. Returns the process exit code.
int run(const RunConfig &config, std::string *message = nullptr);

}  // namespace mepnl
