// End-to-end checks through the installed command-line interface.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "doctest.h"
#include "json.hpp"

#ifndef DELTAH_BIN
#error "DELTAH_BIN must point at the deltah executable"
#endif
#ifndef DELTAH_PROGRAMS
#error "DELTAH_PROGRAMS must point at the programs directory"
#endif

namespace {

struct RunResult {
  int exit_code;
  std::string output;  // stdout and stderr combined
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(DELTAH_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) {
    out.append(buf, n);
  }
  int status = pclose(pipe);
  return RunResult{WEXITSTATUS(status), out};
}

std::string prog(const std::string& name) {
  return std::string(DELTAH_PROGRAMS) + "/" + name;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("check prints the abbreviated intersection type") {
  RunResult r = run_cli("check " + prog("succ_pair.dh"));
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "(odd -> even) /\\ (even -> odd)"));
}

TEST_CASE("check rejects the negative corpus with exit 2") {
  RunResult r = run_cli("check " + prog("negative/pred_zero.dh"));
  CHECK(r.exit_code == 2);
  CHECK(contains(r.output, "T-Pred"));
  CHECK(contains(r.output, "pred-needs-nonzero"));
}

TEST_CASE("run reports blame with exit 1") {
  RunResult r = run_cli("run " + prog("failing_check.dh") + " --strategy all");
  CHECK(r.exit_code == 1);
  CHECK(contains(r.output, "blame"));
}

TEST_CASE("run explores the delayed intersection cast") {
  RunResult r =
      run_cli("run " + prog("delayed_cast.dh") + " --strategy all --numerals");
  CHECK(r.exit_code == 1);  // the mismatched wedge choices blame
  CHECK(contains(r.output, "value: 1"));
  CHECK(contains(r.output, "blame"));
}

TEST_CASE("run --json round-trips through the documented schema") {
  RunResult r = run_cli("run " + prog("delayed_cast.dh") +
                        " --strategy all --numerals --json");
  nlohmann::json j = nlohmann::json::parse(r.output);
  CHECK(j["values"].is_array());
  CHECK(j["values"][0] == "1");
  CHECK(j["blame"] == true);
  CHECK(j["stuck"].is_array());
  CHECK(j["fuel_exhausted"].is_array());
  CHECK(j["states_explored"].is_number());
  CHECK(j["exit_code"] == 1);
}

TEST_CASE("trace prints labeled steps ending in blame") {
  RunResult r = run_cli("trace " + prog("failing_check.dh"));
  CHECK(r.exit_code == 1);
  CHECK(contains(r.output, "step 1 ["));
  CHECK(contains(r.output, "[RC-Waiting]"));
  CHECK(contains(r.output, "[RC-Activate]"));
  CHECK(contains(r.output, "[RC-Fail]"));
  CHECK(contains(r.output, "blame"));
}

TEST_CASE("essence prints the plain skeleton") {
  RunResult r = run_cli("essence " + prog("succ_pair.dh"));
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "fun x:nat. succ x"));
}

TEST_CASE("the plain evaluator accepts pred 0") {
  RunResult r = run_cli("run " + prog("negative/pred_zero.dh") +
                        " --lang pcfv");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "0"));
}

TEST_CASE("runtime checking through the CLI") {
  RunResult r = run_cli("check " + prog("succ_pair.dh") + " --runtime");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "yes"));
}

TEST_CASE("fuzz runs a small property batch") {
  RunResult r = run_cli(
      "fuzz --prop value-inversion --cases 10 --seed 4 --fuel 600 --json");
  CHECK(r.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(r.output);
  CHECK(j["property"] == "value-inversion");
  CHECK(j["failed"] == 0);
}

TEST_CASE("exit codes for usage and missing files") {
  CHECK(run_cli("frobnicate").exit_code == 64);
  CHECK(run_cli("fuzz --prop no-such-property").exit_code == 64);
  CHECK(run_cli("check /no/such/file.dh").exit_code == 66);
  CHECK(run_cli("run " + prog("negative/runtime_form.dh")).exit_code == 65);
}

TEST_CASE("version flag") {
  RunResult r = run_cli("--version");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "deltah"));
}
