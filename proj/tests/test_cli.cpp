// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace
{

fs::path scratch(const std::string &name)
{
  const fs::path dir = fs::temp_directory_path() / ("mepnl_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int cli(const std::string &args, const std::string &env = {})
{
  const std::string cmd = env + " \"" MEPNL_CLI_PATH "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path &p)
{
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json results(const fs::path &dir) { return json::parse(slurp(dir / "results.json")); }

}  // namespace

TEST_CASE("solve writes a converged result")
{
  const fs::path out = scratch("solve");
  CHECK(cli("solve --gen random --n 30 --m 4 --lambda0 0.15+0.1i --out " + out.string()) == 0);
  const json r = results(out);
  CHECK(r["converged"] == true);
  CHECK(r["exit_code"] == 0);
  CHECK(r["schema_version"] == 1);
  CHECK(r["config"]["source"]["generator"] == "random");
  CHECK(r["quadruplets"].size() == 1);
  CHECK(r["quadruplets"][0]["res_a"].get<double>() <= 1e-10);
  CHECK(r.contains("trace"));
  CHECK(fs::exists(out / "trace.csv"));
}

TEST_CASE("results are deterministic apart from timings")
{
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const std::string args = "solve --gen random --n 40 --m 5 --seed 9 --solver resinv --lambda0 0.1 --maxit 50 --out ";
  const int ca = cli(args + a.string()), cb = cli(args + b.string());
  CHECK(ca == cb);
  json ra = results(a), rb = results(b);
  ra.erase("timings");
  rb.erase("timings");
  CHECK(ra.dump() == rb.dump());
  CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
}

TEST_CASE("size cap gives its own exit code and no files")
{
  const fs::path out = scratch("cap");
  CHECK(cli("solve --gen random --n 100 --m 10 --solver delta --out " + out.string(), "MEPNL_CAP=500") == 5);
  CHECK(fs::is_empty(out));
}

TEST_CASE("I/O and usage failures")
{
  const fs::path out = scratch("io");
  std::ofstream(out / "bad.mtx") << "%%MatrixMarket matrix coordinate real general\n2 2 1\nnonsense\n";
  const std::string bad = (out / "bad.mtx").string();
  CHECK(cli("check --matrix-files " + bad + "," + bad + "," + bad + "," + bad + "," + bad + "," + bad +
            " --out " + out.string()) == 4);
  CHECK(cli("check --matrix-files /nonexistent/a.mtx,b,c,d,e,f --out " + out.string()) == 4);
  CHECK(cli("solve --gen nosuch --out " + out.string()) == 1);
  CHECK(cli("solve --no-such-flag") == 1);
  CHECK(cli("") == 1);
  CHECK(cli("solve --help") == 0);
}

TEST_CASE("non-convergence is reported with a result file")
{
  const fs::path out = scratch("maxit");
  CHECK(cli("solve --gen random --n 30 --m 4 --lambda0 5+5i --maxit 1 --out " + out.string()) == 2);
  const json r = results(out);
  CHECK(r["converged"] == false);
  CHECK(r["exit_code"] == 2);
}

TEST_CASE("generate then load through files")
{
  const fs::path gen = scratch("gen"), direct = scratch("gen_direct"), loaded = scratch("gen_loaded");
  CHECK(cli("generate --gen random --n 12 --m 3 --seed 4 --out " + gen.string()) == 0);
  std::string files;
  for (const char *name : {"A1", "A2", "A3", "B1", "B2", "B3"})
    files += (files.empty() ? "" : ",") + (gen / (std::string(name) + ".mtx")).string();
  CHECK(cli("check --matrix-files " + files + " --c-file " + (gen / "c.mtx").string() + " --out " +
            loaded.string()) == 0);
  CHECK(cli("check --gen random --n 12 --m 3 --seed 4 --out " + direct.string()) == 0);
  const json a = results(direct)["check"], b = results(loaded)["check"];
  CHECK(a["norms"].dump() == b["norms"].dump());
  CHECK(a["branch_values"].dump() == b["branch_values"].dump());
}

TEST_CASE("branches writes a CSV table")
{
  const fs::path out = scratch("branches");
  CHECK(cli("branches --gen sqrt --grid=-1:0.1:1 --branch 0 --branch 1 --out " + out.string()) == 0);
  const std::string csv = slurp(out / "branches.csv");
  CHECK(csv.rfind("lambda_re,lambda_im,g0_re,g0_im,g0_gap,g1_re,g1_im,g1_gap\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 22);
}

TEST_CASE("config file with flag override")
{
  const fs::path out = scratch("config");
  std::ofstream(out / "run.json") << R"({"command":"solve","source":{"generator":"random","n":25,"m":3,"seed":2},"solver":"delta"})";
  CHECK(cli("solve --config " + (out / "run.json").string() + " --n 20 --out " + out.string()) == 0);
  const json r = results(out);
  CHECK(r["config"]["source"]["n"] == 20);
  CHECK(r["config"]["solver"] == "delta");
  CHECK(r["quadruplets"].size() == 60);
}
