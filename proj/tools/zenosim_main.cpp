// zenosim command-line front end. Every subcommand prints machine-readable
// output (JSON on stdout) and uses the project-wide exit vocabulary:
//   0 definite verdict / success
//   1 invalid input (parse or validation failure)
//   2 exhausted / indefinite
//   3 precondition violation
#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zenosim/counter.hpp"
#include "zenosim/dovetail.hpp"
#include "zenosim/format.hpp"
#include "zenosim/machine.hpp"
#include "zenosim/universal.hpp"
#include "zenosim/zeno_halt.hpp"

namespace {

using namespace zenosim;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitIndefinite = 2;
constexpr int kExitPrecondition = 3;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::FuelTooSmall:
      return kExitIndefinite;
    case Errc::NotRightMover:
    case Errc::MalformedState:
    case Errc::LimitReached:
    case Errc::NotAtLimit:
      return kExitPrecondition;
    default:
      return kExitInvalid;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::BadArgument, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ParsedProgram load_program(const std::string& path) { return parse_program(read_file(path)); }

std::uint64_t default_fuel() {
  if (const char* env = std::getenv("ZENOSIM_FUEL")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 10000;
}

std::string render_word(const std::vector<std::string>& word) {
  bool single = true;
  for (const auto& t : word) single = single && t.size() == 1;
  std::string out;
  for (const auto& t : word) {
    if (!single && !out.empty()) out += ' ';
    out += t;
  }
  return out;
}

MachineRegistry build_registry(const ParsedProgram& main,
                               const std::vector<std::string>& with_files) {
  MachineRegistry registry;
  registry.add(main.machine);
  for (const auto& path : with_files) registry.add(load_program(path).machine);
  // The name u is reserved for the limit decider; unless explicitly
  // provided it resolves to the never-halting placeholder.
  for (const OracleIf& o : main.machine.oracles())
    if (!registry.contains(o.oracle_machine) && o.oracle_machine == "u")
      registry.add(build_placeholder_u());
  return registry;
}

int cmd_validate(const std::string& file) {
  ParsedProgram p = load_program(file);
  ordered_json j;
  j["valid"] = true;
  j["machine"] = p.machine.name();
  j["states"] = p.machine.state_count();
  j["rules"] = p.machine.rules().size();
  j["oracles"] = p.machine.oracles().size();
  std::cout << j.dump() << "\n";
  return kExitOk;
}

int cmd_run(const std::string& file, std::uint64_t fuel, const std::string& trace,
            const std::vector<std::string>& with_files) {
  ParsedProgram p = load_program(file);
  MachineRegistry registry = build_registry(p, with_files);
  RegistryResolver resolver(registry, fuel);
  OracleResolver* res = p.machine.has_oracles() ? &resolver : nullptr;

  Configuration c = initial_config(p.machine, p.input.value_or(std::vector<std::string>{}));
  RunResult result;
  result.final_config = c;
  for (std::uint64_t i = 0; i < fuel; ++i) {
    OracleStepResult r = step_with_oracles(c, p.machine, res);
    if (r.blocked) {
      result = RunResult{false, StepKind::Continued, c.steps, c, true};
      break;
    }
    if (r.outcome != StepKind::Continued) {
      result = RunResult{true, r.outcome, c.steps, c};
      break;
    }
    c = std::move(r.config);
    result = RunResult{false, StepKind::Continued, c.steps, c};
    if (trace == "jsonl") {
      ordered_json rec;
      rec["step"] = c.steps.finite_part;
      rec["state"] = p.machine.state_name(c.state);
      rec["head1"] = c.tape1.head;
      rec["head2"] = c.tape2.head;
      std::cout << rec.dump() << "\n";
    } else if (trace == "text") {
      std::cout << "step " << c.steps.finite_part << ": " << p.machine.state_name(c.state)
                << " h1=" << c.tape1.head << " h2=" << c.tape2.head << "\n";
    }
  }

  ordered_json j;
  j["result"] = result.halted ? "halted" : "exhausted";
  if (result.halted) j["outcome"] = step_kind_name(result.outcome);
  j["steps"] = to_string(result.steps_used);
  j["state"] = p.machine.state_name(result.final_config.state);
  j["head1"] = result.final_config.tape1.head;
  j["head2"] = result.final_config.tape2.head;
  if (result.blocked_on_oracle) j["blocked_on_oracle"] = true;
  std::cout << j.dump() << "\n";
  return result.halted ? kExitOk : kExitIndefinite;
}

int cmd_zeno(const std::string& file, std::uint64_t fuel, bool limit_stage,
             const std::string& mu0, const std::vector<std::string>& with_files) {
  ParsedProgram p = load_program(file);
  MachineRegistry registry = build_registry(p, with_files);
  RegistryResolver resolver(registry, fuel);
  OracleResolver* res = p.machine.has_oracles() ? &resolver : nullptr;

  ZenoSchedule schedule{parse_fraction(mu0)};
  ZenoOutcome out = zeno_halt_check(p.machine, p.input.value_or(std::vector<std::string>{}),
                                    fuel, limit_stage, schedule, res);
  if (const auto* v = std::get_if<HaltVerdict>(&out)) {
    std::cout << verdict_to_json(*v) << "\n";
    return kExitOk;
  }
  const auto& ex = std::get<ZenoExhausted>(out);
  ordered_json j;
  j["result"] = "exhausted";
  j["steps"] = to_string(ex.config.steps);
  j["counter"] = ex.counter.render();
  std::cout << j.dump() << "\n";
  return kExitIndefinite;
}

int cmd_counter(std::uint64_t n, bool limit) {
  HalvingCounter c = HalvingCounter::init();
  for (std::uint64_t i = 0; i < n; ++i) c = c.halve();
  if (limit) c = c.take_limit();
  std::cout << c.render() << "\n";
  return kExitOk;
}

int cmd_dovetail(const std::string& file, std::uint64_t fuel, std::uint64_t w,
                 const std::string& trace, const std::vector<std::string>& with_files) {
  ParsedProgram p = load_program(file);
  MachineRegistry registry = build_registry(p, with_files);

  DovetailTraceSink sink;
  if (trace == "jsonl")
    sink = [](const DovetailTraceRecord& rec) { std::cout << trace_record_to_json(rec) << "\n"; };
  else if (trace == "text")
    sink = [](const DovetailTraceRecord& rec) {
      std::cout << "m=" << rec.m.str() << " r=" << rec.r << " "
                << sub_area_status_name(rec.status) << " state=" << rec.state_token << "\n";
    };

  std::vector<std::string> input = p.input.value_or(std::vector<std::string>{});
  DovetailState s = run_dovetail(p.machine, input, registry, fuel, w, sink);
  UDecision d = u_decide(s);
  ProfileReport profile = classify_halting_profile(p.machine, input, registry, fuel, w);

  ordered_json j;
  j["rounds"] = s.rounds_done;
  j["m"] = s.m_saturated ? ordered_json("saturated") : ordered_json(s.round_m.str());
  j["instructions"] = s.instructions_used;
  j["sub_areas"] = s.areas.size();
  j["t"] = s.t_flag;
  j["q"] = s.q_flag;
  j["decision"] = d.bit;
  j["decision_path"] = d.path;
  j["survivors"] = surviving_leaves(s);
  j["classification"] = ordered_json::parse(profile_report_to_json(profile));
  std::cout << j.dump() << "\n";
  return kExitOk;
}

int cmd_paradox(std::uint64_t fuel, std::uint64_t w) {
  std::cout << paradox_report_to_json(paradox_report(fuel, w)) << "\n";
  return kExitOk;
}

int cmd_dfa(const std::string& file, std::size_t max_len, std::uint64_t fuel,
            const std::optional<std::string>& against) {
  ParsedProgram p = load_program(file);
  Dfa dfa = right_mover_to_dfa(p.machine);  // throws NotRightMover -> exit 3

  EquivResult eq;
  if (against) {
    ParsedProgram other = load_program(*against);
    eq = language_equiv_bounded(dfa, other.machine, max_len, fuel);
  } else {
    eq = language_equiv_bounded(dfa, p.machine, max_len, fuel);
  }

  ordered_json j;
  j["right_mover"] = true;
  j["dfa_states"] = dfa.state_count();
  j["max_len"] = max_len;
  j["equivalent"] = eq.equivalent;
  if (!eq.equivalent) j["counterexample"] = render_word(eq.counterexample);
  std::cout << j.dump() << "\n";
  return eq.equivalent ? kExitOk : kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zeno-machine simulation toolkit"};
  app.require_subcommand(1);

  std::uint64_t fuel = default_fuel();
  std::uint64_t w = 16;
  std::string mu0 = "1";
  std::string trace = "none";
  bool limit_stage = true;
  std::size_t max_len = 10;
  std::uint64_t counter_n = 0;
  bool counter_limit = false;
  std::string file;
  std::optional<std::string> against;
  std::vector<std::string> with_files;

  auto add_fuel = [&](CLI::App* cmd) {
    cmd->add_option("--fuel", fuel, "step budget (env ZENOSIM_FUEL overrides the default)");
  };
  auto add_with = [&](CLI::App* cmd) {
    cmd->add_option("--with", with_files, "register an additional machine file")
        ->check(CLI::ExistingFile);
  };

  CLI::App* validate = app.add_subcommand("validate", "parse and validate a .tm file");
  validate->add_option("file", file)->required()->check(CLI::ExistingFile);

  CLI::App* runc = app.add_subcommand("run", "run a machine directly");
  runc->add_option("file", file)->required()->check(CLI::ExistingFile);
  add_fuel(runc);
  add_with(runc);
  runc->add_option("--trace", trace, "per-step trace: text or jsonl");

  CLI::App* zeno = app.add_subcommand("zeno", "Zeno halting procedure");
  zeno->add_option("file", file)->required()->check(CLI::ExistingFile);
  add_fuel(zeno);
  add_with(zeno);
  zeno->add_flag("--limit-stage,!--no-limit-stage", limit_stage,
                 "take the symbolic limit after fuel runs out (default on)");
  zeno->add_option("--mu0", mu0, "initial step duration, exact fraction");

  CLI::App* counter = app.add_subcommand("counter", "halving counter states");
  counter->add_option("--n", counter_n, "number of halvings");
  counter->add_flag("--limit", counter_limit, "take the w-limit");

  CLI::App* dovetail = app.add_subcommand("dovetail", "dovetailing scheduler");
  dovetail->add_option("file", file)->required()->check(CLI::ExistingFile);
  add_fuel(dovetail);
  add_with(dovetail);
  dovetail->add_option("--w", w, "post-limit step budget");
  dovetail->add_option("--trace", trace, "per (round, sub-area) trace: text or jsonl");

  CLI::App* paradox = app.add_subcommand("paradox", "y-on-y contradiction table");
  add_fuel(paradox);
  paradox->add_option("--w", w, "post-limit step budget");

  CLI::App* dfa = app.add_subcommand("dfa", "right-mover to DFA, bounded equivalence");
  dfa->add_option("file", file)->required()->check(CLI::ExistingFile);
  add_fuel(dfa);
  dfa->add_option("--max-len", max_len, "check all words up to this length");
  dfa->add_option("--against", against, "compare the DFA against this machine instead")
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(file);
    if (runc->parsed()) return cmd_run(file, fuel, trace, with_files);
    if (zeno->parsed()) return cmd_zeno(file, fuel, limit_stage, mu0, with_files);
    if (counter->parsed()) return cmd_counter(counter_n, counter_limit);
    if (dovetail->parsed()) return cmd_dovetail(file, fuel, w, trace, with_files);
    if (paradox->parsed()) return cmd_paradox(fuel, w);
    if (dfa->parsed()) return cmd_dfa(file, max_len, fuel, against);
  } catch (const zenosim::Error& e) {
    std::cerr << "error (" << errc_name(e.code()) << "): " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
