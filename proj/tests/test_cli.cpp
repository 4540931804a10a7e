// Exercises the installed command-line surface end to end: exit codes,
// JSON shapes, and the pinned renderings, through a real process.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "support/test_machines.hpp"
#include "zenosim/dovetail.hpp"
#include "zenosim/format.hpp"

using namespace zenosim;
using namespace zenosim::testing;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string out;
};

CmdResult run_cli(const std::string& args) {
  std::string cmd = std::string(ZENOSIM_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult r;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

struct Fixture {
  fs::path dir;

  Fixture() {
    dir = fs::temp_directory_path() / "zenosim_cli_tests";
    fs::create_directories(dir);
    write("halter3.tm", serialize_program(n_step_halter(3)));
    write("flipflop.tm", serialize_program(flip_flop()));
    write("rm1.tm", serialize_program(ends_in_one_right_mover()));
    write("writer.tm", serialize_program(cell_writer()));

    MachineRegistry registry;
    registry.add(build_placeholder_u());
    write("y.tm", serialize_program(build_program_y("u", registry)));

    // ends-in-0 right mover, for --against
    RawMachine rz;
    rz.name = "rm0";
    rz.states = {"z0", "z1", "za"};
    rz.alphabet = {"_", "0", "1"};
    rz.input_alphabet = {"0", "1"};
    rz.start = "z0";
    rz.accepting = {"za"};
    rz.rules.push_back({"z0", "0", "_", "z1", "0", "_", "R", "N"});
    rz.rules.push_back({"z0", "1", "_", "z0", "1", "_", "R", "N"});
    rz.rules.push_back({"z1", "0", "_", "z1", "0", "_", "R", "N"});
    rz.rules.push_back({"z1", "1", "_", "z0", "1", "_", "R", "N"});
    rz.rules.push_back({"z1", "_", "_", "za", "_", "_", "R", "N"});
    write("rm0.tm", serialize_program(validate_spec(rz)));

    write("bad.tm",
          "machine bad\nstates: q0 qa\nalphabet: _ 1\nstart: q0\naccept: qa\n"
          "rule: q0 _ _ -> qa 1 _ R\nend\n");  // one move token missing
    write("noend.tm", "machine ne\nstates: q0\nalphabet: _\nstart: q0\n");
  }

  void write(const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
  }

  std::string path(const std::string& name) const { return (dir / name).string(); }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

}  // namespace

TEST_CASE("validate: exit 0 on valid, 1 on broken files") {
  CmdResult ok = run_cli("validate " + fixture().path("halter3.tm"));
  CHECK(ok.exit_code == 0);
  json j = json::parse(ok.out);
  CHECK(j["valid"] == true);
  CHECK(j["machine"] == "halt3");

  CHECK(run_cli("validate " + fixture().path("bad.tm")).exit_code == 1);
  CHECK(run_cli("validate " + fixture().path("noend.tm")).exit_code == 1);
}

TEST_CASE("run: halting and exhaustion exit codes") {
  CmdResult halt = run_cli("run " + fixture().path("halter3.tm"));
  CHECK(halt.exit_code == 0);
  json j = json::parse(halt.out);
  CHECK(j["result"] == "halted");
  CHECK(j["outcome"] == "accept");
  CHECK(j["steps"] == "3");

  CmdResult loop = run_cli("run --fuel 10 " + fixture().path("flipflop.tm"));
  CHECK(loop.exit_code == 2);
  CHECK(json::parse(loop.out)["result"] == "exhausted");
}

TEST_CASE("run --trace jsonl emits one record per step") {
  CmdResult r = run_cli("run --trace jsonl " + fixture().path("halter3.tm"));
  CHECK(r.exit_code == 0);
  std::istringstream is(r.out);
  std::string line;
  int trace_lines = 0;
  json last;
  while (std::getline(is, line)) {
    last = json::parse(line);
    if (last.contains("step")) {
      ++trace_lines;
      CHECK(last.contains("state"));
      CHECK(last.contains("head1"));
      CHECK(last.contains("head2"));
    }
  }
  CHECK(trace_lines == 3);          // steps_used
  CHECK(last["result"] == "halted");  // final summary comes last
}

TEST_CASE("zeno: verdicts and the exhausted mode") {
  CmdResult halt = run_cli("zeno " + fixture().path("halter3.tm"));
  CHECK(halt.exit_code == 0);
  json j = json::parse(halt.out);
  CHECK(j["bit"] == 1);
  CHECK(j["mode"] == "concrete");
  CHECK(j["steps"] == "3");
  CHECK(j["counter"] == "001@2");
  CHECK(j["wall_clock"] == "7/4");

  CmdResult loop = run_cli("zeno --fuel 50 " + fixture().path("flipflop.tm"));
  CHECK(loop.exit_code == 0);
  json jl = json::parse(loop.out);
  CHECK(jl["bit"] == 0);
  CHECK(jl["mode"] == "symbolic-limit");
  CHECK(jl["wall_clock"] == "2");

  CmdResult ex = run_cli("zeno --fuel 50 --no-limit-stage " + fixture().path("flipflop.tm"));
  CHECK(ex.exit_code == 2);
  CHECK(json::parse(ex.out)["result"] == "exhausted");

  CmdResult scaled = run_cli("zeno --mu0 3/2 " + fixture().path("flipflop.tm"));
  CHECK(json::parse(scaled.out)["wall_clock"] == "3");
}

TEST_CASE("counter renderings are pinned") {
  CHECK(run_cli("counter --n 1").out == "01@1\n");
  CHECK(run_cli("counter --n 2").out == "001@2\n");
  CHECK(run_cli("counter --limit").out == "0@w*1+0\n");
  CHECK(run_cli("counter --n 0").out == "1@0\n");
}

TEST_CASE("dovetail: summaries and the y-on-y run") {
  CmdResult halt = run_cli("dovetail " + fixture().path("halter3.tm"));
  CHECK(halt.exit_code == 0);
  json j = json::parse(halt.out);
  CHECK(j["t"] == 1);
  CHECK(j["decision"] == 1);
  CHECK(j["sub_areas"] == 1);

  CHECK(j["classification"]["profile"] == "condition-1");

  CmdResult yy = run_cli("dovetail --fuel 500 " + fixture().path("y.tm"));
  CHECK(yy.exit_code == 0);
  json jy = json::parse(yy.out);
  CHECK(jy["t"] == 0);
  CHECK(jy["q"] == 1);
  CHECK(jy["decision"] == 0);
  CHECK(jy["sub_areas"] == 3);
  CHECK(jy["classification"]["profile"] == "condition-2-evidence");

  // w = 0 suppresses the post-limit evidence entirely
  CmdResult suppressed = run_cli("dovetail --fuel 500 --w 0 " + fixture().path("y.tm"));
  CHECK(json::parse(suppressed.out)["classification"]["profile"] == "unknown");
}

TEST_CASE("dovetail --trace jsonl records have the pinned keys") {
  CmdResult r = run_cli("dovetail --fuel 30 --trace jsonl " + fixture().path("flipflop.tm"));
  CHECK(r.exit_code == 0);
  std::istringstream is(r.out);
  std::string line;
  int records = 0;
  while (std::getline(is, line)) {
    json j = json::parse(line);
    if (j.contains("decision")) continue;  // final summary
    ++records;
    for (const char* key : {"m", "r", "status", "state", "heads", "spawned", "killed_by"})
      CHECK(j.contains(key));
  }
  CHECK(records > 0);
}

TEST_CASE("paradox: always exit 0 with the two-row table") {
  CmdResult r = run_cli("paradox --fuel 1000 --w 16");
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  REQUIRE(j["rows"].size() == 2);
  CHECK(j["rows"][0]["assumption"] == 0);
  CHECK(j["rows"][0]["consistent"] == false);
  CHECK(j["rows"][1]["assumption"] == 1);
  CHECK(j["rows"][1]["consistent"] == false);
}

TEST_CASE("dfa: equivalence, counterexample and precondition exits") {
  CmdResult ok = run_cli("dfa " + fixture().path("rm1.tm"));
  CHECK(ok.exit_code == 0);
  json j = json::parse(ok.out);
  CHECK(j["equivalent"] == true);
  CHECK(j["dfa_states"] == 2);

  CmdResult not_rm = run_cli("dfa " + fixture().path("writer.tm"));
  CHECK(not_rm.exit_code == 3);

  CmdResult diff =
      run_cli("dfa --max-len 3 --against " + fixture().path("rm0.tm") + " " +
              fixture().path("rm1.tm"));
  CHECK(diff.exit_code == 1);
  json jd = json::parse(diff.out);
  CHECK(jd["equivalent"] == false);
  CHECK(jd["counterexample"] == "0");
}

TEST_CASE("ZENOSIM_FUEL overrides the default budget") {
  CmdResult r = run_cli("run " + fixture().path("flipflop.tm"));
  // default 10000
  CHECK(json::parse(r.out)["steps"] == "10000");
  std::string cmd = "ZENOSIM_FUEL=5 " + std::string(ZENOSIM_CLI_PATH) + " run " +
                    fixture().path("flipflop.tm") + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  pclose(pipe);
  CHECK(json::parse(out)["steps"] == "5");
}

TEST_CASE("missing files and bad flags exit 1") {
  CHECK(run_cli("validate /nonexistent/x.tm").exit_code != 0);
  CHECK(run_cli("zeno --mu0 0 " + fixture().path("halter3.tm")).exit_code == 1);
}
