#include <doctest.h>

#include <map>
#include <random>

#include "support/test_machines.hpp"
#include "zenosim/machine.hpp"

using namespace zenosim;
using namespace zenosim::testing;

namespace {

// Independent reference interpreter: token-level rule scan over std::map
// tapes, written directly from the transition-table reading of the rules.
// Used as the hand-executed-table oracle for step().
struct NaiveMachine {
  std::vector<RawRule> rules;
  std::vector<std::string> accepting;
  std::string blank = "_";

  struct State {
    std::string q;
    std::map<std::int64_t, std::string> t1, t2;
    std::int64_t h1 = 0, h2 = 0;
  };

  std::string read(const std::map<std::int64_t, std::string>& t, std::int64_t h) const {
    auto it = t.find(h);
    return it == t.end() ? blank : it->second;
  }

  // returns "accept", "stuck" or "" (moved)
  std::string naive_step(State& s) const {
    for (const auto& a : accepting)
      if (a == s.q) return "accept";
    std::string r1 = read(s.t1, s.h1), r2 = read(s.t2, s.h2);
    for (const RawRule& r : rules) {
      if (r.state != s.q || r.read1 != r1 || r.read2 != r2) continue;
      if (r.write1 == blank) s.t1.erase(s.h1); else s.t1[s.h1] = r.write1;
      if (r.write2 == blank) s.t2.erase(s.h2); else s.t2[s.h2] = r.write2;
      s.h1 += r.move1 == "L" ? -1 : r.move1 == "R" ? 1 : 0;
      s.h2 += r.move2 == "L" ? -1 : r.move2 == "R" ? 1 : 0;
      s.q = r.next;
      return "";
    }
    return "stuck";
  }
};

bool agrees(const NaiveMachine::State& ns, const Configuration& c, const MachineSpec& m) {
  if (ns.q != m.state_name(c.state)) return false;
  if (ns.h1 != c.tape1.head || ns.h2 != c.tape2.head) return false;
  auto tape_agrees = [&](const std::map<std::int64_t, std::string>& nt, const Tape& t) {
    if (nt.size() != t.cells.size()) return false;
    for (const auto& [i, tok] : nt)
      if (m.symbol_name(t.read_at(i)) != tok) return false;
    return true;
  };
  return tape_agrees(ns.t1, c.tape1) && tape_agrees(ns.t2, c.tape2);
}

}  // namespace

TEST_CASE("validate_spec accepts the minimal legal machine") {
  MachineSpec m = one_rule_machine();
  CHECK(m.state_count() == 2);
  CHECK(m.rules().size() == 1);
  CHECK(m.symbol_name(m.blank()) == "_");
  CHECK(m.input_alphabet().empty());
}

TEST_CASE("validate_spec rejects rules from accepting states") {
  RawMachine raw;
  raw.states = {"q0", "qa"};
  raw.alphabet = {"_", "1"};
  raw.start = "q0";
  raw.accepting = {"qa"};
  raw.rules.push_back({"qa", "_", "_", "q0", "_", "_", "N", "N"});
  CHECK_THROWS_WITH_AS(validate_spec(raw), doctest::Contains("accepting"), Error);
  try {
    validate_spec(raw);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::RuleFromAccepting);
  }
}

TEST_CASE("validate_spec rejects a blank in sigma") {
  RawMachine raw;
  raw.states = {"q0"};
  raw.alphabet = {"_", "1"};
  raw.input_alphabet = {"_"};
  raw.start = "q0";
  try {
    validate_spec(raw);
    FAIL("expected BlankInInput");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BlankInInput);
  }
}

TEST_CASE("validate_spec catches unknown names and duplicates") {
  RawMachine raw;
  raw.states = {"q0"};
  raw.alphabet = {"_", "1"};
  raw.start = "q0";

  auto expect = [](RawMachine r, Errc code) {
    try {
      validate_spec(r);
      FAIL_CHECK("expected error " << errc_name(code));
    } catch (const Error& e) {
      CHECK(e.code() == code);
    }
  };

  RawMachine bad = raw;
  bad.rules.push_back({"nope", "_", "_", "q0", "_", "_", "N", "N"});
  expect(bad, Errc::UnknownState);

  bad = raw;
  bad.rules.push_back({"q0", "x", "_", "q0", "_", "_", "N", "N"});
  expect(bad, Errc::UnknownSymbol);

  bad = raw;
  bad.rules.push_back({"q0", "_", "_", "q0", "_", "_", "N", "N"});
  bad.rules.push_back({"q0", "_", "_", "q0", "1", "_", "R", "N"});
  expect(bad, Errc::DuplicateRule);

  bad = raw;
  bad.start = "missing";
  expect(bad, Errc::UnknownState);
}

TEST_CASE("oracle states own their whole rule family") {
  RawMachine raw;
  raw.states = {"q0", "q1", "q2"};
  raw.alphabet = {"_", "0", "1"};
  raw.start = "q0";
  raw.oracles.push_back({"q0", "==", "f", "1", "q1", "q2"});
  raw.rules.push_back({"q0", "_", "_", "q1", "_", "_", "N", "N"});
  try {
    validate_spec(raw);
    FAIL("expected DuplicateRule");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DuplicateRule);
  }
}

TEST_CASE("initial_config places input at cells 0..len-1") {
  MachineSpec m = [&] {
    RawMachine raw;
    raw.states = {"q0"};
    raw.alphabet = {"_", "0", "1"};
    raw.input_alphabet = {"0", "1"};
    raw.start = "q0";
    return validate_spec(raw);
  }();

  std::vector<std::string> empty;
  Configuration c = initial_config(m, empty);
  CHECK(c.tape1.nonblank_count() == 0);
  CHECK(c.tape2.nonblank_count() == 0);
  CHECK(c.tape1.head == 0);
  CHECK(c.tape2.head == 0);
  CHECK(c.steps == finite_ord(0));

  std::vector<std::string> word{"1", "0", "1"};
  c = initial_config(m, word);
  CHECK(m.symbol_name(c.tape1.read_at(0)) == "1");
  CHECK(m.symbol_name(c.tape1.read_at(1)) == "0");
  CHECK(m.symbol_name(c.tape1.read_at(2)) == "1");
  CHECK(c.tape1.nonblank_count() == 3);  // "0" is a symbol, not the blank
  CHECK(c.tape1.head == 0);

  std::vector<std::string> with_blank{"1", "_", "1"};
  CHECK_THROWS_AS(initial_config(m, with_blank), Error);
}

TEST_CASE("single transition of the one-rule machine") {
  MachineSpec m = one_rule_machine();
  Configuration c = initial_config(m, {});
  StepResult r = step(c, m);
  CHECK(r.outcome == StepKind::Continued);
  CHECK(m.state_name(r.config.state) == "qa");
  CHECK(m.symbol_name(r.config.tape1.read_at(0)) == "1");
  CHECK(r.config.tape1.head == 1);
  CHECK(r.config.steps == finite_ord(1));

  StepResult halt = step(r.config, m);
  CHECK(halt.outcome == StepKind::AcceptHalt);
  CHECK(halt.config.same_snapshot(r.config));
}

TEST_CASE("halting is absorbing") {
  MachineSpec m = one_rule_machine();
  Configuration c = initial_config(m, {});
  c = step(c, m).config;  // now in qa
  for (int i = 0; i < 5; ++i) {
    StepResult r = step(c, m);
    CHECK(r.outcome == StepKind::AcceptHalt);
    c = r.config;
  }

  // stuck is just as absorbing: no rule ever becomes applicable
  RawMachine raw;
  raw.states = {"q0", "q1"};
  raw.alphabet = {"_", "1"};
  raw.start = "q0";
  raw.rules.push_back({"q0", "_", "_", "q1", "1", "_", "N", "N"});
  MachineSpec stuck = validate_spec(raw);
  Configuration sc = initial_config(stuck, {});
  sc = step(sc, stuck).config;  // q1 reading 1: undefined
  for (int i = 0; i < 5; ++i) {
    StepResult r = step(sc, stuck);
    CHECK(r.outcome == StepKind::StuckHalt);
    CHECK(r.config.same_snapshot(sc));
    sc = r.config;
  }
}

TEST_CASE("step agrees with the naive reference on the enumerated machines") {
  // the enumerated two-state family, each executed both ways for 40 steps
  struct Rhs {
    const char* next;
    const char* write;
    const char* move;
  };
  std::vector<Rhs> rhs_options;
  for (const char* next : {"q0", "qa"})
    for (const char* write : {"_", "1"})
      for (const char* move : {"L", "N", "R"}) rhs_options.push_back({next, write, move});

  int stuck_seen = 0;
  for (std::size_t a = 0; a <= rhs_options.size(); ++a)
    for (std::size_t b = 0; b <= rhs_options.size(); ++b) {
      RawMachine raw;
      raw.states = {"q0", "qa"};
      raw.alphabet = {"_", "1"};
      raw.input_alphabet = {"1"};
      raw.start = "q0";
      raw.accepting = {"qa"};
      if (a > 0) raw.rules.push_back({"q0", "_", "_", rhs_options[a - 1].next,
                                      rhs_options[a - 1].write, "_", rhs_options[a - 1].move, "N"});
      if (b > 0) raw.rules.push_back({"q0", "1", "_", rhs_options[b - 1].next,
                                      rhs_options[b - 1].write, "_", rhs_options[b - 1].move, "N"});
      MachineSpec m = validate_spec(raw);
      NaiveMachine naive{raw.rules, raw.accepting};

      Configuration c = initial_config(m, {});
      NaiveMachine::State ns{"q0"};
      for (int i = 0; i < 40; ++i) {
        StepResult r = step(c, m);
        NaiveMachine::State ns_next = ns;
        std::string verdict = naive.naive_step(ns_next);
        if (verdict == "accept") {
          CHECK(r.outcome == StepKind::AcceptHalt);
          break;
        }
        if (verdict == "stuck") {
          CHECK(r.outcome == StepKind::StuckHalt);
          CHECK(r.config.same_snapshot(c));  // unchanged
          ++stuck_seen;
          break;
        }
        REQUIRE(r.outcome == StepKind::Continued);
        REQUIRE(agrees(ns_next, r.config, m));
        c = std::move(r.config);
        ns = std::move(ns_next);
      }
    }
  CHECK(stuck_seen > 0);
}

TEST_CASE("run: fuel and halting accounting") {
  MachineSpec one = one_rule_machine();
  RunResult r = run(one, {}, 10);
  CHECK(r.halted);
  CHECK(r.outcome == StepKind::AcceptHalt);
  CHECK(r.steps_used == finite_ord(1));

  MachineSpec ff = flip_flop();
  r = run(ff, {}, 7);
  CHECK_FALSE(r.halted);
  CHECK(r.steps_used == finite_ord(7));

  MachineSpec inc = unary_incrementer();
  std::vector<std::string> input{"1", "1", "1"};
  r = run(inc, input, 10);
  CHECK(r.halted);
  CHECK(r.outcome == StepKind::AcceptHalt);
  CHECK(r.steps_used == finite_ord(5));  // hand-traced in test_machines.hpp
  CHECK(inc.state_name(r.final_config.state) == "qa");
  CHECK(r.final_config.tape1.cells.size() == 4);  // 1111
  CHECK(r.final_config.tape1.head == 3);
}

TEST_CASE("determinism: equal inputs give equal outputs") {
  MachineGen gen(42);
  for (int i = 0; i < 50; ++i) {
    MachineSpec m = gen.random_machine();
    Configuration c = initial_config(m, gen.random_input(4));
    for (int s = 0; s < 20; ++s) {
      StepResult r1 = step(c, m);
      StepResult r2 = step(c, m);
      CHECK(r1.outcome == r2.outcome);
      CHECK(r1.config.same_snapshot(r2.config));
      CHECK(r1.config.steps == r2.config.steps);
      if (r1.outcome != StepKind::Continued) break;
      c = std::move(r1.config);
    }
  }
}

TEST_CASE("time invariance: the successor ignores the step count") {
  // same (state, tapes, heads) reached along different histories must step
  // to the same (state, tapes, heads)
  MachineGen gen(1234);
  std::mt19937 rng(99);
  int checked = 0;
  while (checked < 1000) {
    MachineSpec m = gen.random_machine();
    Configuration c = initial_config(m, gen.random_input(4));
    int walk = std::uniform_int_distribution<int>(0, 15)(rng);
    for (int i = 0; i < walk; ++i) {
      StepResult r = step(c, m);
      if (r.outcome != StepKind::Continued) break;
      c = std::move(r.config);
    }
    Configuration other = c;
    other.steps = finite_ord(std::uniform_int_distribution<std::uint64_t>(0, 1 << 20)(rng));

    StepResult r1 = step(c, m);
    StepResult r2 = step(other, m);
    CHECK(r1.outcome == r2.outcome);
    CHECK(r1.config.same_snapshot(r2.config));
    ++checked;
  }
}

TEST_CASE("unbounded tape: the cell writer reaches cell N within N steps") {
  MachineSpec w = cell_writer();
  Configuration c = initial_config(w, {});
  for (int n = 1; n <= 10000; ++n) {
    c = step(c, w).config;
    CHECK(c.tape1.head == n);
  }
  CHECK(c.tape1.cells.size() == 10000);
  CHECK(c.tape1.read_at(9999) != c.tape1.blank);
}

TEST_CASE("sparse tapes never exceed |input| + steps non-blank cells") {
  MachineGen gen(77);
  for (int i = 0; i < 40; ++i) {
    MachineSpec m = gen.random_machine();
    auto input = gen.random_input(5);
    Configuration c = initial_config(m, input);
    for (std::uint64_t s = 1; s <= 50; ++s) {
      StepResult r = step(c, m);
      if (r.outcome != StepKind::Continued) break;
      c = std::move(r.config);
      // one write per tape per step
      CHECK(c.tape1.nonblank_count() <= input.size() + s);
      CHECK(c.tape2.nonblank_count() <= s);
    }
  }
}

TEST_CASE("oracle argument and output windows") {
  RawMachine raw;
  raw.states = {"q0"};
  raw.alphabet = {"_", "0", "1"};
  raw.input_alphabet = {"0", "1"};
  raw.start = "q0";
  MachineSpec m = validate_spec(raw);

  std::vector<std::string> word{"1", "0", "1"};
  Configuration c = initial_config(m, word);
  CHECK(oracle_argument(c, m).empty());  // nothing strictly left of head 0
  c.tape1.head = 2;
  CHECK(oracle_argument(c, m) == std::vector<std::string>{"1", "0"});
  c.tape1.head = 5;
  CHECK(oracle_argument(c, m) == std::vector<std::string>{"1", "0", "1"});

  Tape out;
  out.blank = m.blank();
  CHECK(tape_output_tokens(out, m).empty());
  out.write_at(3, *m.find_symbol("1"));
  out.write_at(5, *m.find_symbol("0"));
  CHECK(tape_output_tokens(out, m) == std::vector<std::string>{"1", "_", "0"});
}

TEST_CASE("relation evaluation") {
  using V = std::vector<std::string>;
  CHECK(eval_relation(Relation::Eq, V{"0"}, V{"0"}));
  CHECK_FALSE(eval_relation(Relation::Eq, V{"1"}, V{"0"}));
  CHECK(eval_relation(Relation::Lt, V{"0"}, V{"1"}));
  CHECK(eval_relation(Relation::Le, V{"0", "1"}, V{"0", "1"}));
  CHECK(eval_relation(Relation::Gt, V{"1", "0"}, V{"1"}));  // longer extension is greater
  CHECK(eval_relation(Relation::Ge, V{}, V{}));
  CHECK_FALSE(eval_relation(Relation::Gt, V{}, V{}));
}

TEST_CASE("stub and registry resolvers") {
  MachineRegistry registry;
  registry.add(unary_incrementer());

  OracleIf oracle;
  oracle.oracle_machine = "inc";

  StubResolver stub;
  CHECK_FALSE(stub.oracle_output(oracle, {}).has_value());
  stub.set_output("inc", {"1"});
  CHECK(stub.oracle_output(oracle, {}) == std::vector<std::string>{"1"});

  RegistryResolver res(registry, 100);
  auto out = res.oracle_output(oracle, {"1", "1"});
  REQUIRE(out.has_value());
  CHECK(out->empty());  // the incrementer writes only on tape1

  OracleIf unknown;
  unknown.oracle_machine = "missing";
  CHECK_THROWS_AS(res.oracle_output(unknown, {}), Error);

  // diverging callee: unresolved
  MachineRegistry reg2;
  reg2.add(flip_flop());
  OracleIf ff_call;
  ff_call.oracle_machine = "flipflop";
  RegistryResolver res2(reg2, 50);
  CHECK_FALSE(res2.oracle_output(ff_call, {}).has_value());
}
