#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"
#include "hrgraph/io.hpp"
#include "hrgraph/tail_data.hpp"

using namespace hrgraph;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hrgraph_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Runs the CLI with stdout and stderr discarded and returns its exit code.
int run(const std::string& args) {
  const std::string cmd = std::string("\"") + HRGRAPH_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("simulate, fit, evaluate and diagnose") {
  const fs::path dir = scratch_dir("pipeline");
  REQUIRE(run("simulate --model ba:8:1 --k 40 --seed 3 --out " + q(dir / "sim")) == 0);
  CHECK(fs::exists(dir / "sim" / "model.json"));
  CHECK(fs::exists(dir / "sim" / "data.csv"));
  const Json manifest = read_json(dir / "sim" / "manifest.json");
  CHECK(manifest["command"] == "simulate");
  CHECK(manifest["seed"] == 3);
  const Matrix data = read_data_csv(dir / "sim" / "data.csv");
  CHECK(data.cols() == 8);
  CHECK(data.rows() == sample_size_for_k(40));

  REQUIRE(run("fit --data " + q(dir / "sim" / "data.csv") + " --out " + q(dir / "fit")) == 0);
  CHECK(fs::exists(dir / "fit" / "graph.json"));
  CHECK(fs::exists(dir / "fit" / "ic_report.json"));
  CHECK(graph_from_json(read_json(dir / "fit" / "graph.json")).dim() == 8);

  REQUIRE(run("fit --method mst --data " + q(dir / "sim" / "data.csv") + " --out " + q(dir / "mst")) == 0);
  CHECK(graph_from_json(read_json(dir / "mst" / "graph.json")).num_edges() == 7);

  REQUIRE(run("fit --method eglearn-gl --ic none --data " + q(dir / "sim" / "data.csv") + " --out " +
              q(dir / "gl")) == 0);
  CHECK(fs::exists(dir / "gl" / "path.json"));

  REQUIRE(run("evaluate --truth " + q(dir / "sim" / "model.json") + " --estimate " + q(dir / "mst" / "graph.json") +
              " --out " + q(dir / "eval")) == 0);
  const Json eval = read_json(dir / "eval" / "evaluation.json");
  CHECK(eval["f_score"].get<double>() >= 0.0);
  CHECK(eval["f_score"].get<double>() <= 1.0);

  REQUIRE(run("diagnose --model " + q(dir / "sim" / "model.json") + " --rho-min 0.01 --rho-max 0.02 --out " +
              q(dir / "diag")) == 0);
  const Json diag = read_json(dir / "diag" / "diagnostics.json");
  CHECK(diag["d"] == 8);
  CHECK(diag["emtp2"] == true);
  fs::remove_all(dir);
}

TEST_CASE("same seed, same output") {
  const fs::path dir = scratch_dir("seed");
  REQUIRE(run("simulate --model bm:2:3:1 --n 100 --seed 9 --out " + q(dir / "a")) == 0);
  REQUIRE(run("simulate --model bm:2:3:1 --n 100 --seed 9 --out " + q(dir / "b")) == 0);
  REQUIRE(run("simulate --model bm:2:3:1 --n 100 --seed 10 --out " + q(dir / "c")) == 0);
  CHECK(slurp(dir / "a" / "data.csv") == slurp(dir / "b" / "data.csv"));
  CHECK(slurp(dir / "a" / "data.csv") != slurp(dir / "c" / "data.csv"));
  CHECK(slurp(dir / "a" / "model.json") == slurp(dir / "b" / "model.json"));
  fs::remove_all(dir);
}

TEST_CASE("experiment writes a results table") {
  const fs::path dir = scratch_dir("experiment");
  REQUIRE(run("experiment --preset ba-d20 --reps 1 --seed 2 --jobs 2 --out " + q(dir)) == 0);
  std::istringstream in(slurp(dir / "results.csv"));
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 1 + 6 * 6);
  fs::remove_all(dir);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch_dir("codes");
  CHECK(run("") == 2);
  CHECK(run("simulate") == 2);
  CHECK(run("simulate --model ba:8 --out " + q(dir)) == 2);
  CHECK(run("simulate --model ba:8:1 --n -5 --out " + q(dir)) == 2);
  CHECK(run("experiment --preset nope --out " + q(dir)) == 2);
  CHECK(run("fit --data " + q(dir / "missing.csv") + " --out " + q(dir)) == 4);
  std::ofstream(dir / "broken.json") << "{\"gamma\": ";
  CHECK(run("diagnose --model " + q(dir / "broken.json") + " --out " + q(dir)) == 2);
  std::ofstream(dir / "gaps.csv") << "a,b,c\n1,2,3\n4,,6\n";
  CHECK(run("fit --data " + q(dir / "gaps.csv") + " --out " + q(dir)) == 2);
  CHECK(run("--help") == 0);
  fs::remove_all(dir);
}

TEST_SUITE_END();
