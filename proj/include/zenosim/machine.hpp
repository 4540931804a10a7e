#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "zenosim/error.hpp"
#include "zenosim/ordinal.hpp"

namespace zenosim {

using StateId = std::uint32_t;
using SymbolId = std::uint32_t;

enum class Move : char { Left = 'L', None = 'N', Right = 'R' };

enum class Relation { Eq, Le, Ge, Lt, Gt };

const char* relation_token(Relation r);
std::optional<Relation> parse_relation(std::string_view token);

struct RuleLhs {
  StateId state;
  SymbolId read1;
  SymbolId read2;
  friend auto operator<=>(const RuleLhs&, const RuleLhs&) = default;
};

struct RuleRhs {
  StateId next;
  SymbolId write1;
  SymbolId write2;
  Move move1;
  Move move2;
  friend bool operator==(const RuleRhs&, const RuleRhs&) = default;
};

// A structured branch `if (R(f(x), k))`. The condition may be undecidable at
// any finite stage, which is exactly what the dovetailing scheduler
// speculates through. The referenced machine is looked up by name at use
// time; MachineSpec validation cannot see other machines.
struct OracleIf {
  StateId at_state;
  Relation relation;
  std::string oracle_machine;
  std::vector<SymbolId> threshold;  // k, symbols of this machine's alphabet
  StateId true_state;
  StateId false_state;
  friend bool operator==(const OracleIf&, const OracleIf&) = default;
};

// Unvalidated machine description, as assembled by the parser or built in
// test code. validate_spec turns it into a MachineSpec or throws.
struct RawRule {
  std::string state, read1, read2, next, write1, write2, move1, move2;
  int line = 0;
};

struct RawOracle {
  std::string at_state, relation, machine, threshold, true_state, false_state;
  int line = 0;
};

struct RawMachine {
  std::string name = "m";
  std::vector<std::string> states;
  std::string blank = "_";
  std::vector<std::string> alphabet;        // gamma; blank is appended if missing
  std::vector<std::string> input_alphabet;  // sigma
  std::string start;
  std::vector<std::string> accepting;
  std::vector<RawRule> rules;
  std::vector<RawOracle> oracles;
};

// The validated 7-tuple with two-tape rules. States and symbols are interned
// as dense ids in declaration order; all hot-path structures work on ids and
// the token names are kept only for rendering and serialization.
class MachineSpec {
 public:
  const std::string& name() const { return name_; }
  std::size_t state_count() const { return state_names_.size(); }
  std::size_t symbol_count() const { return symbol_names_.size(); }
  const std::string& state_name(StateId q) const { return state_names_[q]; }
  const std::string& symbol_name(SymbolId s) const { return symbol_names_[s]; }
  const std::vector<std::string>& state_names() const { return state_names_; }
  const std::vector<std::string>& symbol_names() const { return symbol_names_; }

  std::optional<StateId> find_state(std::string_view token) const;
  std::optional<SymbolId> find_symbol(std::string_view token) const;

  SymbolId blank() const { return blank_; }
  StateId start() const { return start_; }
  bool is_accepting(StateId q) const { return accepting_mask_[q]; }
  const std::vector<StateId>& accepting_states() const { return accepting_; }
  const std::vector<SymbolId>& input_alphabet() const { return input_alphabet_; }
  bool in_sigma(SymbolId s) const { return sigma_mask_[s]; }

  const std::map<RuleLhs, RuleRhs>& rules() const { return rules_; }
  const RuleRhs* find_rule(StateId q, SymbolId r1, SymbolId r2) const {
    auto it = rules_.find(RuleLhs{q, r1, r2});
    return it == rules_.end() ? nullptr : &it->second;
  }

  const std::vector<OracleIf>& oracles() const { return oracles_; }
  bool has_oracles() const { return !oracles_.empty(); }
  const OracleIf* oracle_at(StateId q) const;

  std::vector<std::string> tokens_of(std::span<const SymbolId> symbols) const;

  friend bool operator==(const MachineSpec&, const MachineSpec&) = default;

 private:
  friend MachineSpec validate_spec(const RawMachine& raw);

  std::string name_;
  std::vector<std::string> state_names_;
  std::vector<std::string> symbol_names_;
  SymbolId blank_ = 0;
  std::vector<SymbolId> input_alphabet_;
  std::vector<bool> sigma_mask_;
  StateId start_ = 0;
  std::vector<StateId> accepting_;
  std::vector<bool> accepting_mask_;
  std::map<RuleLhs, RuleRhs> rules_;
  std::vector<OracleIf> oracles_;
  std::unordered_map<StateId, std::size_t> oracle_index_;
};

MachineSpec validate_spec(const RawMachine& raw);

// Sparse bi-infinite tape: only non-blank cells are stored, and writing the
// blank erases, so equality of the cell map is equality of tape contents.
struct Tape {
  std::unordered_map<std::int64_t, SymbolId> cells;
  std::int64_t head = 0;
  SymbolId blank = 0;

  SymbolId read_at(std::int64_t i) const {
    auto it = cells.find(i);
    return it == cells.end() ? blank : it->second;
  }
  SymbolId read() const { return read_at(head); }
  void write_at(std::int64_t i, SymbolId s) {
    if (s == blank)
      cells.erase(i);
    else
      cells[i] = s;
  }
  void write(SymbolId s) { write_at(head, s); }

  std::size_t nonblank_count() const { return cells.size(); }
  std::optional<std::int64_t> leftmost_nonblank() const;
  std::optional<std::int64_t> rightmost_nonblank() const;

  friend bool operator==(const Tape&, const Tape&) = default;
};

struct Configuration {
  StateId state = 0;
  Tape tape1;
  Tape tape2;
  OrdinalTime steps;  // omega part stays 0 during concrete execution

  // Everything the transition function may look at. `steps` is deliberately
  // excluded: two configurations reached along different histories are the
  // same machine situation (MPCT).
  bool same_snapshot(const Configuration& o) const {
    return state == o.state && tape1 == o.tape1 && tape2 == o.tape2;
  }

  // Canonical string of (state, heads, sorted cells) for cycle detection.
  std::string snapshot_key() const;
};

enum class StepKind { Continued, AcceptHalt, StuckHalt };

const char* step_kind_name(StepKind k);

struct StepResult {
  Configuration config;
  StepKind outcome = StepKind::Continued;
};

Configuration initial_config(const MachineSpec& m, std::span<const std::string> input);

// One transition. Writes are applied before moves and both tapes act
// simultaneously, following the output order of the transition function.
// Halting is absorbing: an accepting state returns AcceptHalt and an
// undefined rule returns StuckHalt, both leaving the configuration alone.
// Depends only on (c, m); oracle states have no rules and read as stuck
// here (the oracle-aware engine below intercepts them first).
StepResult step(const Configuration& c, const MachineSpec& m);

struct RunResult {
  bool halted = false;
  StepKind outcome = StepKind::Continued;  // AcceptHalt or StuckHalt when halted
  OrdinalTime steps_used;
  Configuration final_config;
  // Set when execution stopped because an oracle condition could not be
  // resolved at finite truncation; such a run is Exhausted, not halted.
  bool blocked_on_oracle = false;
  std::optional<std::size_t> blocking_oracle;  // index into m.oracles()
};

// Answers oracle calls. Returns f's output symbols, or nullopt when the
// truth is not determined at finite truncation (f diverges within budget,
// the call is ill-formed, or the machine is unknown).
class OracleResolver {
 public:
  virtual ~OracleResolver() = default;
  virtual std::optional<std::vector<std::string>> oracle_output(
      const OracleIf& oracle, const std::vector<std::string>& x) = 0;
};

class MachineRegistry {
 public:
  void add(MachineSpec m);
  bool contains(const std::string& name) const { return machines_.count(name) > 0; }
  const MachineSpec& get(const std::string& name) const;
  const MachineSpec* find(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, MachineSpec> machines_;
};

// Fixed answers per oracle machine name, for running programs under an
// assumption ("let u(y,y) be 0") instead of evaluating the callee.
class StubResolver : public OracleResolver {
 public:
  StubResolver() = default;
  void set_output(std::string machine, std::vector<std::string> output);
  std::optional<std::vector<std::string>> oracle_output(
      const OracleIf& oracle, const std::vector<std::string>& x) override;

 private:
  std::map<std::string, std::vector<std::string>> outputs_;
};

// Evaluates f(x) by actually running the referenced machine, fuel-bounded.
// Nested oracle calls resolve through the same registry up to a fixed
// depth; anything deeper reads as unresolved.
class RegistryResolver : public OracleResolver {
 public:
  RegistryResolver(const MachineRegistry& registry, std::uint64_t fuel, int max_depth = 8)
      : registry_(&registry), fuel_(fuel), max_depth_(max_depth) {}

  std::optional<std::vector<std::string>> oracle_output(
      const OracleIf& oracle, const std::vector<std::string>& x) override;

 private:
  const MachineRegistry* registry_;
  std::uint64_t fuel_;
  int max_depth_;
  int depth_ = 0;
};

// R(lhs, k): element-wise equality for ==, lexicographic token comparison
// for the order relations.
bool eval_relation(Relation r, std::span<const std::string> lhs,
                   std::span<const std::string> rhs);

// The input x of an oracle call: tape1 content strictly left of the head,
// from the leftmost non-blank cell. Programs are expected to park the head
// just right of the argument before entering the oracle state.
std::vector<std::string> oracle_argument(const Configuration& c, const MachineSpec& m);

// Output of an oracle machine: tape2 content between the outermost
// non-blank cells.
std::vector<std::string> tape_output_tokens(const Tape& t, const MachineSpec& m);

struct OracleStepResult {
  Configuration config;
  StepKind outcome = StepKind::Continued;
  bool blocked = false;            // unresolved oracle; config unchanged
  bool took_oracle_branch = false;
  std::optional<bool> oracle_truth;
};

// Like step(), but an oracle state resolves its condition through
// `resolver` and branches (one instruction). A null resolver, or an
// unresolved answer, blocks instead.
OracleStepResult step_with_oracles(const Configuration& c, const MachineSpec& m,
                                   OracleResolver* resolver);

// Iterates step at most `fuel` times. Reports Halted the first time the
// outcome is not Continued; blocked oracle states end the run early as
// Exhausted with blocked_on_oracle set.
RunResult run(const MachineSpec& m, std::span<const std::string> input, std::uint64_t fuel,
              OracleResolver* resolver = nullptr);

RunResult run_from(Configuration c, const MachineSpec& m, std::uint64_t fuel,
                   OracleResolver* resolver = nullptr);

// AcceptHalt/StuckHalt that step() would report on c without advancing it,
// or nullopt if the machine can still move. Oracle states count as live
// when `treat_oracle_as_live` (the dovetail view) and as stuck otherwise
// (the plain transition-function view).
std::optional<StepKind> halted_now(const Configuration& c, const MachineSpec& m,
                                   bool treat_oracle_as_live = false);

}  // namespace zenosim
