#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zenosim/machine.hpp"
#include "zenosim/rational.hpp"

namespace zenosim {

enum class SubAreaStatus { Active, Killed, Halted, Absent };

const char* sub_area_status_name(SubAreaStatus s);

// One speculative branch of the dovetailed computation. A sub-area spawns
// two children when it reaches an oracle branch whose truth is still open:
// one per assumed answer. Killed is absorbing and wins over Halted.
struct SubArea {
  std::uint64_t index = 0;  // r, 1-based, assigned after the last existing sub-area
  std::optional<std::uint64_t> parent;
  std::optional<bool> assumption;  // the answer this branch assumed at its spawn
  SubAreaStatus status = SubAreaStatus::Active;
  Configuration config;
  std::optional<std::size_t> job;  // oracle evaluation this branch is waiting on
  bool spawn_pending = false;      // children materialize at the next round
  std::optional<StepKind> halt_kind;
  std::optional<std::size_t> killed_by;  // job whose resolution killed it
};

// Ground-truth evaluation of one oracle encounter. The callee runs one
// step per round, interleaved with the branches that speculate past it;
// when it halts the wrong-assumption subtree is killed.
struct OracleJob {
  std::size_t id = 0;
  std::uint64_t owner = 0;
  OracleIf oracle;
  std::vector<std::string> argument;

  enum class State { Pending, Running, Resolved, Failed };
  State state = State::Pending;
  Configuration callee_config;
  const MachineSpec* callee = nullptr;
  std::optional<bool> truth;
  std::optional<std::uint64_t> true_child;
  std::optional<std::uint64_t> false_child;
};

// Scheduler state for the dovetailed run of one program. The sub-tape of
// round m is recorded as trace records (one per (round, sub-area)) rather
// than raw cells; the ledger below is the current truth about every
// sub-area. The round size m follows m <- m + 2^m and is kept exact until
// it escapes any reasonable width, after which it saturates: by then it
// long exceeds the number of sub-areas a finite run can create.
struct DovetailState {
  MachineSpec program;
  std::vector<std::string> input;
  const MachineRegistry* registry = nullptr;
  std::uint64_t fuel = 10000;
  std::uint64_t w_budget = 16;

  BigInt round_m = 1;
  bool m_saturated = false;
  std::vector<BigInt> m_history;  // m at the start of each executed round
  std::uint64_t rounds_done = 0;
  std::uint64_t instructions_used = 0;

  std::vector<SubArea> areas;  // areas[i] has index i+1
  std::vector<OracleJob> jobs;
  int t_flag = 0;
  int q_flag = 0;
  bool limit_complete = false;
};

struct DovetailTraceRecord {
  BigInt m;
  std::uint64_t r = 0;
  SubAreaStatus status = SubAreaStatus::Active;
  std::string state_token;
  std::int64_t head1 = 0;
  std::int64_t head2 = 0;
  std::vector<std::uint64_t> spawned;
  std::optional<std::size_t> killed_by;
};

using DovetailTraceSink = std::function<void(const DovetailTraceRecord&)>;

std::string trace_record_to_json(const DovetailTraceRecord& rec);

// Every oracle the program references must resolve to a registered machine.
DovetailState dovetail_init(MachineSpec program, std::vector<std::string> input,
                            const MachineRegistry& registry, std::uint64_t fuel,
                            std::uint64_t w_budget);

// One iteration of the scheduler: materialize the children marked last
// round, advance every live sub-area by one instruction (a blocked one
// advances its oracle's run instead), apply kills for freshly resolved
// oracles, refresh the t and q flags, and grow m.
DovetailState dovetail_round(DovetailState s, const DovetailTraceSink& sink = {});

// Rounds until the r=1 halting check fires, the cumulative instruction
// count exceeds fuel, or nothing can move anymore; then marks the state
// limit-complete (the explicit stand-in for "after w rounds").
DovetailState run_dovetail(MachineSpec program, std::vector<std::string> input,
                           const MachineRegistry& registry, std::uint64_t fuel,
                           std::uint64_t w_budget, const DovetailTraceSink& sink = {});

// Indices of non-killed sub-areas that no live branch descends from; a
// fully resolved speculative run leaves exactly one.
std::vector<std::uint64_t> surviving_leaves(const DovetailState& s);

struct UDecision {
  int bit = 0;
  std::string path;  // which clause of the decision procedure fired
};

// The post-limit decision procedure. t set -> 1; else q set -> 0; else the
// second and third surviving sub-areas are interrogated, with the
// self-application four-way analysis when the program is the diagonal
// machine built by build_program_y. Undefined collapses to 0.
UDecision u_decide(const DovetailState& s, std::optional<std::uint64_t> w = std::nullopt);

// The diagonal program: one oracle branch on `u_name`'s answer about its
// own input; answer 0 leads to a one-rule accept path, anything else to a
// two-state loop that never stops.
MachineSpec build_program_y(const std::string& u_name, const MachineRegistry& registry);

// A stand-in for the limit decider u in oracle registries: a machine that
// never halts, because u's answer only exists at the limit stage. Any
// finite-budget evaluation of it is honestly unresolved.
MachineSpec build_placeholder_u();

enum class HaltingProfile { Condition1, Condition2Evidence, Unknown };

const char* halting_profile_name(HaltingProfile p);

struct SuffixEvidence {
  bool halted_within_w = false;
  std::uint64_t steps = 0;  // instructions from the branch point, when halted
};

struct ProfileReport {
  HaltingProfile profile = HaltingProfile::Unknown;
  std::optional<std::uint64_t> halt_step;      // Condition1
  std::optional<std::string> oracle_state;     // the gating branch, when one was reached
  std::optional<SuffixEvidence> true_branch;
  std::optional<SuffixEvidence> false_branch;
};

// Condition1: the program halts within fuel with oracles evaluated inline.
// Condition2Evidence: it reaches an oracle branch whose callee does not
// resolve within fuel, and at least one post-branch suffix halts within w
// steps (the other side's exclusion is part of the evidence). w = 0
// suppresses evidence gathering entirely.
ProfileReport classify_halting_profile(const MachineSpec& p, std::span<const std::string> input,
                                       const MachineRegistry& registry, std::uint64_t fuel,
                                       std::uint64_t w);

std::string profile_report_to_json(const ProfileReport& r);

struct ParadoxRow {
  int assumption = 0;    // the stubbed answer u(y,y)
  bool halted = false;   // what y(y) then does at finite truncation
  std::uint64_t steps = 0;  // halting step, or the fuel it outlived
  bool consistent = false;
  std::string detail;
};

struct ParadoxReport {
  std::uint64_t fuel = 0;
  std::uint64_t w = 0;
  std::vector<ParadoxRow> rows;  // exactly two: assumption 0 and 1
};

// Runs y(y) under both stubbed answers for u(y,y) and tabulates how each
// assumption refutes itself. A desk-scale witness of the diagonalization
// argument; no global verdict is claimed.
ParadoxReport paradox_report(std::uint64_t fuel, std::uint64_t w);

std::string paradox_report_to_json(const ParadoxReport& r);

}  // namespace zenosim
