// End-to-end checks of the installed command-line surface: exit codes,
// output formats, and replay files, driven through std::system.

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string out_path = "cli_test_stdout.tmp";
  const std::string command = std::string(TIGHTLAG_CLI_PATH) + " " + args + " > " + out_path +
                              " 2> cli_test_stderr.tmp";
  const int status = std::system(command.c_str());
  std::ifstream in(out_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  int code = -1;
  if (WIFEXITED(status)) code = WEXITSTATUS(status);
  return {code, buffer.str()};
}

std::string data_path(const char* name) {
  return std::string(TIGHTLAG_TEST_DATA_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("cli: nullity of the built-ins") {
  const RunResult m0 = run_cli("nullity --surface m0 --format json");
  CHECK(m0.exit_code == 0);
  CHECK(m0.output.find("\"nullity\": 3") != std::string::npos);
  CHECK(m0.output.find("\"rank_stable\": true") != std::string::npos);

  const RunResult torus = run_cli("nullity --surface torus:0.5,0.3 --format json");
  CHECK(torus.exit_code == 0);
  CHECK(torus.output.find("\"nullity\": 4") != std::string::npos);
}

TEST_CASE("cli: rank-deficient parametric chart exits with the instability code") {
  const RunResult bad = run_cli("nullity --surface param:" + data_path("bad_rank.json"));
  CHECK(bad.exit_code == 2);
}

TEST_CASE("cli: usage errors exit with 64") {
  CHECK(run_cli("nullity --surface banana").exit_code == 64);
  CHECK(run_cli("no-such-command").exit_code == 64);
  CHECK(run_cli("poincare --surface m0 --samples 10 --format xml").exit_code == 64);
  CHECK(run_cli("intersect --surface m0 --replay /nonexistent.json").exit_code == 64);
}

TEST_CASE("cli: kahler scan emits the agreed CSV") {
  const RunResult scan = run_cli("kahler-scan --resolution 64");
  CHECK(scan.exit_code == 0);
  CHECK(scan.output.rfind("sum,diff,dim_im_psi2\n", 0) == 0);
  const long rows = std::count(scan.output.begin(), scan.output.end(), '\n') - 1;
  CHECK(rows == 64 * 64);

  // Odd resolutions place grid nodes exactly on the Lagrangian line.
  const RunResult fine = run_cli("kahler-scan --resolution 9");
  CHECK(fine.output.find("0,1.5707963267948966,1") != std::string::npos);
  CHECK(fine.output.find("1.5707963267948966,1.5707963267948966,2") != std::string::npos);
}

TEST_CASE("cli: poincare run is reproducible byte for byte") {
  const std::string args = "poincare --surface m0 --samples 2000 --seed 7 --format json";
  const RunResult first = run_cli(args);
  const RunResult second = run_cli(args);
  CHECK(first.exit_code == 0);
  CHECK(first.output == second.output);
  CHECK(first.output.find("\"seed\": 7") != std::string::npos);
  CHECK(first.output.find("\"mean\": 12468.36") != std::string::npos);  // 128 pi^4
}

TEST_CASE("cli: tightness violation produces a replayable file and exit 1") {
  std::remove("tightlag_violations.json");
  const RunResult bad = run_cli(
      "tightness --surface torus:0.5,0.5 --regime global --samples 2000 --seed 5 "
      "--expect-tight --format json");
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("\"passed\": false") != std::string::npos);

  const RunResult replay =
      run_cli("intersect --surface torus:0.5,0.5 --replay tightlag_violations.json");
  CHECK(replay.exit_code == 0);
  CHECK(replay.output.find("mismatches: 0") != std::string::npos);

  // Replaying against the wrong surface must flag mismatches.
  const RunResult wrong =
      run_cli("intersect --surface torus:0,0 --replay tightlag_violations.json");
  CHECK(wrong.exit_code == 1);
}

TEST_CASE("cli: tightness passes for the tight built-ins") {
  const RunResult m0 = run_cli(
      "tightness --surface m0 --regime global --samples 1500 --seed 3 --expect-tight");
  CHECK(m0.exit_code == 0);
  const RunResult local = run_cli(
      "tightness --surface torus:0.5,0.3 --regime local --epsilon 0.05 --samples 800 "
      "--seed 3 --expect-tight");
  CHECK(local.exit_code == 0);
}

TEST_CASE("cli: check-lagrangian distinguishes the identity graph") {
  const RunResult good = run_cli("check-lagrangian --surface m0");
  CHECK(good.exit_code == 0);
  const RunResult bad =
      run_cli("check-lagrangian --surface param:" + data_path("graph_identity.json") +
              " --format json");
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("\"lagrangian\": false") != std::string::npos);
}

TEST_CASE("cli: morse bridge over a few random fields") {
  const RunResult m0 = run_cli("morse --surface m0 --samples 5 --seed 2 --format json");
  CHECK(m0.exit_code == 0);
  CHECK(m0.output.find("\"counts_match_betti_sum\": true") != std::string::npos);
}

TEST_CASE("cli: intersect sampling histogram") {
  const RunResult rep = run_cli("intersect --surface m0 --samples 200 --seed 9 --format json");
  CHECK(rep.exit_code == 0);
  CHECK(rep.output.find("\"count_histogram\": {\"2\": 200}") != std::string::npos);
}
