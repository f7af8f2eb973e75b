// Exercises the installed binary end to end: exit-code contract, file
// round trips, seed override and rerun determinism.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "solenoid/io.hpp"

using namespace solenoid;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("solenoid_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + SOLENOID_CLI_PATH + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("exit code contract") {
  TempDir tmp;
  const std::string mu = (tmp.path / "mu.json").string();
  const std::string seg = (tmp.path / "seg.json").string();
  const std::string sig = (tmp.path / "sig.json").string();

  CHECK(run("gen --scenario loop --atoms 128 --out " + mu) == 0);
  CHECK(run("gen --scenario segment --out " + seg + " --div " + sig) == 0);

  // 0: passing check
  CHECK(run("check-div --charge " + mu) == 0);
  // 1: failing check (segment is far from divergence-free)
  CHECK(run("check-div --charge " + seg) == 1);
  // 2: usage error
  CHECK(run("decompose") == 2);
  CHECK(run("no-such-command") == 2);
  // 3: parse error
  const std::string broken = (tmp.path / "broken.json").string();
  std::ofstream(broken) << "{ not json";
  CHECK(run("check-div --charge " + broken) == 3);
  // 3: missing file
  CHECK(run("decompose --charge " + (tmp.path / "nope.json").string()) == 3);
  // 2: asking for a divergence measure the scenario does not define
  CHECK(run("gen --scenario loop --out " + mu + " --div " + sig) == 2);
}

TEST_CASE("decompose writes ensembles, reports and csv") {
  TempDir tmp;
  const std::string mu = (tmp.path / "mu.json").string();
  const std::string ens = (tmp.path / "ens.json").string();
  const std::string rep = (tmp.path / "rep.json").string();
  const std::string csv = (tmp.path / "ens.csv").string();
  REQUIRE(run("gen --scenario loop --atoms 96 --out " + mu) == 0);
  REQUIRE(run("decompose --charge " + mu +
              " --ell 1 --eps 0.1 --curves 50 --step 0.01 --seed 5 --fields 3 --functions 3"
              " --out " + ens + " --report " + rep + " --csv " + csv) == 0);
  const CurveEnsemble nu = load_ensemble(ens);
  CHECK(nu.size() == 50);
  CHECK(fs::exists(rep));
  CHECK(fs::exists(csv));
}

TEST_CASE("rerun with the same seed yields identical reports") {
  TempDir tmp;
  const std::string mu = (tmp.path / "mu.json").string();
  const std::string r1 = (tmp.path / "r1.json").string();
  const std::string r2 = (tmp.path / "r2.json").string();
  REQUIRE(run("gen --scenario loop --atoms 96 --out " + mu) == 0);
  const std::string args = "decompose --charge " + mu +
                           " --ell 1 --eps 0.1 --curves 40 --step 0.01 --seed 9 --threads 1"
                           " --fields 2 --functions 2 --report ";
  REQUIRE(run(args + r1) == 0);
  REQUIRE(run(args + r2) == 0);
  CHECK(reports_equal_ignoring_timestamp(read_text_file(r1), read_text_file(r2)));
  // report --compare agrees
  CHECK(run("report --in " + r1 + " --compare " + r2) == 0);
}

TEST_CASE("SOLENOID_SEED overrides the seed flag") {
  TempDir tmp;
  const std::string mu = (tmp.path / "mu.json").string();
  const std::string r1 = (tmp.path / "r1.json").string();
  const std::string r2 = (tmp.path / "r2.json").string();
  REQUIRE(run("gen --scenario loop --atoms 96 --out " + mu) == 0);
  const std::string base = "decompose --charge " + mu +
                           " --ell 1 --eps 0.1 --curves 30 --step 0.01 --fields 2 --functions 2";
  REQUIRE(run(base + " --seed 1 --report " + r1, "SOLENOID_SEED=42") == 0);
  REQUIRE(run(base + " --seed 2 --report " + r2, "SOLENOID_SEED=42") == 0);
  CHECK(reports_equal_ignoring_timestamp(read_text_file(r1), read_text_file(r2)));
}

TEST_CASE("lift-decompose round trip") {
  TempDir tmp;
  const std::string seg = (tmp.path / "seg.json").string();
  const std::string sig = (tmp.path / "sig.json").string();
  const std::string ens = (tmp.path / "ens.json").string();
  const std::string rep = (tmp.path / "rep.json").string();
  REQUIRE(run("gen --scenario segment --out " + seg + " --div " + sig) == 0);
  REQUIRE(run("lift-decompose --charge " + seg + " --div " + sig +
              " --ell 1 --eps 0.08 --curves 60 --step 0.005 --column-atoms 16 --slab 0.1"
              " --seed 3 --fields 2 --functions 4 --out " + ens + " --report " + rep) == 0);
  const CurveEnsemble nu = load_ensemble(ens);
  CHECK(nu.dim() == 2);
  CHECK(nu.size() > 0);
  CHECK(fs::exists(rep));
}

TEST_CASE("verify subcommand") {
  TempDir tmp;
  const std::string rep = (tmp.path / "acc.json").string();
  // fast criteria pass at the standard tolerances
  CHECK(run("verify --criteria 1,2 --report " + rep) == 0);
  CHECK(fs::exists(rep));
  // an impossible tolerance makes the checks fail
  CHECK(run("verify --criteria 1 --tolerance-scale 0") == 1);
}

TEST_CASE("report rendering") {
  TempDir tmp;
  const std::string rep = (tmp.path / "r.json").string();
  std::ofstream(rep) << R"({"command": "x", "value": 1.25})";
  CHECK(run("report --in " + rep) == 0);
  const std::string other = (tmp.path / "o.json").string();
  std::ofstream(other) << R"({"command": "x", "value": 1.5})";
  CHECK(run("report --in " + rep + " --compare " + other) == 1);
}
