#include "zenosim/dovetail.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "zenosim/format.hpp"

namespace zenosim {

const char* sub_area_status_name(SubAreaStatus s) {
  switch (s) {
    case SubAreaStatus::Active: return "active";
    case SubAreaStatus::Killed: return "killed";
    case SubAreaStatus::Halted: return "halted";
    case SubAreaStatus::Absent: return "absent";
  }
  return "?";
}

const char* halting_profile_name(HaltingProfile p) {
  switch (p) {
    case HaltingProfile::Condition1: return "condition-1";
    case HaltingProfile::Condition2Evidence: return "condition-2-evidence";
    case HaltingProfile::Unknown: return "unknown";
  }
  return "?";
}

namespace {

// Round sizes grow as m <- m + 2^m; past this bound the exponent itself is
// astronomically larger than any sub-area index a finite run can reach, so
// the value saturates instead of being materialized.
constexpr std::uint64_t kMaxExactExponent = 1u << 20;

void grow_m(DovetailState& s) {
  if (s.m_saturated) return;
  if (s.round_m > kMaxExactExponent) {
    s.m_saturated = true;
    return;
  }
  s.round_m += BigInt(1) << static_cast<std::uint64_t>(s.round_m);
}

nlohmann::ordered_json bigint_json(const BigInt& v) {
  if (v <= BigInt(std::uint64_t(1) << 53)) return nlohmann::ordered_json(v.convert_to<std::uint64_t>());
  return nlohmann::ordered_json(v.str());
}

void kill_subtree(DovetailState& s, std::uint64_t root_index, std::size_t job_id) {
  std::vector<std::uint64_t> stack{root_index};
  while (!stack.empty()) {
    std::uint64_t idx = stack.back();
    stack.pop_back();
    SubArea& a = s.areas[idx - 1];
    if (a.status != SubAreaStatus::Killed) {
      a.status = SubAreaStatus::Killed;  // rules over Halted
      a.killed_by = job_id;
    }
    for (const SubArea& child : s.areas)
      if (child.parent == idx) stack.push_back(child.index);
  }
}

void resolve_job(DovetailState& s, OracleJob& job, const std::vector<std::string>& output) {
  job.truth = eval_relation(job.oracle.relation, output,
                            s.program.tokens_of(job.oracle.threshold));
  job.state = OracleJob::State::Resolved;
  auto wrong = *job.truth ? job.false_child : job.true_child;
  if (wrong) kill_subtree(s, *wrong, job.id);
}

// One step of the callee owned by a blocked sub-area. Counts as the
// sub-area's instruction for the round.
void advance_job(DovetailState& s, OracleJob& job) {
  if (job.state != OracleJob::State::Running) return;
  StepResult r = step(job.callee_config, *job.callee);
  ++s.instructions_used;
  if (r.outcome == StepKind::Continued) {
    job.callee_config = std::move(r.config);
    return;
  }
  resolve_job(s, job, tape_output_tokens(job.callee_config.tape2, *job.callee));
}

// A sub-area whose oracle resolved is, from the branch point on, the
// surviving child's computation; the branch is halted once that child is.
void propagate_halts(DovetailState& s) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (SubArea& a : s.areas) {
      if (a.status != SubAreaStatus::Active || !a.job) continue;
      const OracleJob& job = s.jobs[*a.job];
      if (job.state != OracleJob::State::Resolved) continue;
      auto chosen = *job.truth ? job.true_child : job.false_child;
      if (!chosen) continue;
      const SubArea& child = s.areas[*chosen - 1];
      if (child.status == SubAreaStatus::Halted) {
        a.status = SubAreaStatus::Halted;
        a.halt_kind = child.halt_kind;
        changed = true;
      }
    }
  }
}

void emit(const DovetailTraceSink& sink, const DovetailState& s, const SubArea& a,
          std::vector<std::uint64_t> spawned) {
  if (!sink) return;
  DovetailTraceRecord rec;
  rec.m = s.round_m;
  rec.r = a.index;
  rec.status = a.status;
  rec.state_token = s.program.state_name(a.config.state);
  rec.head1 = a.config.tape1.head;
  rec.head2 = a.config.tape2.head;
  rec.spawned = std::move(spawned);
  rec.killed_by = a.killed_by;
  sink(rec);
}

}  // namespace

std::string trace_record_to_json(const DovetailTraceRecord& rec) {
  nlohmann::ordered_json j;
  j["m"] = bigint_json(rec.m);
  j["r"] = rec.r;
  j["status"] = sub_area_status_name(rec.status);
  j["state"] = rec.state_token;
  j["heads"] = {rec.head1, rec.head2};
  j["spawned"] = rec.spawned;
  if (rec.killed_by)
    j["killed_by"] = *rec.killed_by;
  else
    j["killed_by"] = nullptr;
  return j.dump();
}

DovetailState dovetail_init(MachineSpec program, std::vector<std::string> input,
                            const MachineRegistry& registry, std::uint64_t fuel,
                            std::uint64_t w_budget) {
  for (const OracleIf& o : program.oracles())
    if (!registry.contains(o.oracle_machine))
      fail(Errc::UnknownMachine,
           "oracle references unregistered machine '" + o.oracle_machine + "'");

  DovetailState s;
  s.registry = &registry;
  s.fuel = fuel;
  s.w_budget = w_budget;
  s.input = std::move(input);

  SubArea root;
  root.index = 1;
  root.config = initial_config(program, s.input);
  s.program = std::move(program);
  s.areas.push_back(std::move(root));
  return s;
}

DovetailState dovetail_round(DovetailState s, const DovetailTraceSink& sink) {
  s.m_history.push_back(s.round_m);

  // Children marked at round m-1 materialize now, one per assumed answer,
  // numbered after the last existing sub-area. Their configurations start
  // one instruction past the parent: the branch itself.
  std::vector<std::vector<std::uint64_t>> spawned_now(s.areas.size());
  const std::size_t existing = s.areas.size();
  for (std::size_t i = 0; i < existing; ++i) {
    if (!s.areas[i].spawn_pending) continue;
    s.areas[i].spawn_pending = false;
    OracleJob& job = s.jobs[*s.areas[i].job];
    for (bool assumption : {true, false}) {
      SubArea child;
      child.index = s.areas.size() + 1;
      child.parent = s.areas[i].index;
      child.assumption = assumption;
      child.config = s.areas[i].config;
      child.config.state = assumption ? job.oracle.true_state : job.oracle.false_state;
      ++child.config.steps.finite_part;
      (assumption ? job.true_child : job.false_child) = child.index;
      spawned_now[i].push_back(child.index);
      s.areas.push_back(std::move(child));
    }
    // the callee starts running with the argument captured at the encounter
    job.callee = s.registry->find(job.oracle.oracle_machine);
    try {
      job.callee_config = initial_config(*job.callee, job.argument);
      job.state = OracleJob::State::Running;
    } catch (const Error&) {
      job.state = OracleJob::State::Failed;  // ill-typed call: never resolves
    }
  }
  spawned_now.resize(s.areas.size());

  // The r-loop. Sub-area indices are contiguous, so r beyond the ledger is
  // the psi padding handled after the loop.
  for (std::size_t i = 0; i < s.areas.size(); ++i) {
    if (!s.m_saturated && BigInt(s.areas[i].index) > s.round_m) break;
    SubArea& a = s.areas[i];
    switch (a.status) {
      case SubAreaStatus::Killed:
      case SubAreaStatus::Halted:
      case SubAreaStatus::Absent:
        break;  // absorbing; the record below still shows the mark
      case SubAreaStatus::Active: {
        if (a.job && !a.spawn_pending) {
          // blocked on its oracle: this round's instruction is the callee's
          advance_job(s, s.jobs[*a.job]);
        } else if (!a.job && s.program.oracle_at(a.config.state)) {
          const OracleIf& oracle = *s.program.oracle_at(a.config.state);
          OracleJob job;
          job.id = s.jobs.size();
          job.owner = a.index;
          job.oracle = oracle;
          job.argument = oracle_argument(a.config, s.program);
          a.job = job.id;
          a.spawn_pending = true;
          s.jobs.push_back(std::move(job));
          ++s.instructions_used;  // the branch mark is the instruction
        } else if (!a.job) {
          StepResult r = step(a.config, s.program);
          if (r.outcome == StepKind::Continued) {
            a.config = std::move(r.config);
            ++s.instructions_used;
            if (auto kind = halted_now(a.config, s.program, /*treat_oracle_as_live=*/true)) {
              a.status = SubAreaStatus::Halted;
              a.halt_kind = kind;
            }
          } else {
            a.status = SubAreaStatus::Halted;
            a.halt_kind = r.outcome;
          }
        }
        break;
      }
    }
    emit(sink, s, a, std::move(spawned_now[i]));

    if (a.index == 1 && a.status == SubAreaStatus::Halted) {
      s.t_flag = 1;  // p with i halted: escape the round
      break;
    }
  }

  // psi: indices up to m name no sub-area. They are padding, recorded for
  // small m and skipped once m outruns anything the trace could show.
  if (sink && !s.m_saturated && s.t_flag == 0) {
    const std::uint64_t first_absent = s.areas.size() + 1;
    BigInt last = s.round_m < BigInt(first_absent + 15) ? s.round_m : BigInt(first_absent + 15);
    for (BigInt r = first_absent; r <= last; ++r) {
      DovetailTraceRecord rec;
      rec.m = s.round_m;
      rec.r = r.convert_to<std::uint64_t>();
      rec.status = SubAreaStatus::Absent;
      sink(rec);
    }
  }

  propagate_halts(s);
  if (s.areas[0].status == SubAreaStatus::Halted) s.t_flag = 1;

  s.q_flag = 0;
  for (const SubArea& a : s.areas)
    if (a.status != SubAreaStatus::Killed) s.q_flag = 1;

  grow_m(s);
  ++s.rounds_done;
  return s;
}

DovetailState run_dovetail(MachineSpec program, std::vector<std::string> input,
                           const MachineRegistry& registry, std::uint64_t fuel,
                           std::uint64_t w_budget, const DovetailTraceSink& sink) {
  DovetailState s = dovetail_init(std::move(program), std::move(input), registry, fuel, w_budget);
  while (s.t_flag == 0 && s.instructions_used < s.fuel) {
    std::uint64_t before_instr = s.instructions_used;
    std::size_t before_areas = s.areas.size();
    s = dovetail_round(std::move(s), sink);
    bool pending = std::any_of(s.areas.begin(), s.areas.end(),
                               [](const SubArea& a) { return a.spawn_pending; });
    if (s.instructions_used == before_instr && s.areas.size() == before_areas && !pending)
      break;  // nothing can move anymore
  }
  s.limit_complete = true;
  return s;
}

std::vector<std::uint64_t> surviving_leaves(const DovetailState& s) {
  std::vector<std::uint64_t> out;
  for (const SubArea& a : s.areas) {
    if (a.status == SubAreaStatus::Killed) continue;
    bool has_child = std::any_of(s.areas.begin(), s.areas.end(),
                                 [&](const SubArea& c) { return c.parent == a.index; });
    if (!has_child) out.push_back(a.index);
  }
  return out;
}

namespace {

bool is_self_application(const DovetailState& s) {
  if (s.program.oracles().size() != 1 || !s.registry) return false;
  const std::string& u_name = s.program.oracles()[0].oracle_machine;
  if (!s.registry->contains(u_name)) return false;
  return s.program == build_program_y(u_name, *s.registry);
}

}  // namespace

UDecision u_decide(const DovetailState& s, std::optional<std::uint64_t> w_opt) {
  if (!s.limit_complete)
    fail(Errc::MalformedState, "u_decide requires a limit-complete dovetail state");
  if (s.t_flag == 1) return {1, "t"};
  if (s.q_flag == 1) return {0, "q"};

  // Below the q check: all recorded flags say every sub-area is killed.
  // Reachable only from hand-made states (a live branch keeps q at 1), but
  // Algorithm 4 spells the procedure out, so here it is.
  const std::uint64_t w = w_opt.value_or(s.w_budget);
  std::vector<const SubArea*> alive;
  for (const SubArea& a : s.areas)
    if (a.status != SubAreaStatus::Killed) alive.push_back(&a);
  if (alive.size() < 3)
    fail(Errc::MalformedState, "decision needs a second and third surviving sub-area");
  const SubArea& second = *alive[1];
  const SubArea& third = *alive[2];

  if (second.status != SubAreaStatus::Halted) return {0, "second-not-halted"};

  if (is_self_application(s)) {
    const OracleJob* job = nullptr;
    if (second.parent && s.areas[*second.parent - 1].job)
      job = &s.jobs[*s.areas[*second.parent - 1].job];
    if (!job) fail(Errc::MalformedState, "self-application state has no branching oracle");

    // Under assumed answer a, the branch consistent with a is the child
    // whose assumption matches the condition's value; consistency demands
    // its halting behaviour match what the answer claims.
    auto consistent = [&](int a) {
      std::vector<std::string> output{a == 1 ? "1" : "0"};
      bool truth = eval_relation(job->oracle.relation, output,
                                 s.program.tokens_of(job->oracle.threshold));
      auto chosen = truth ? job->true_child : job->false_child;
      if (!chosen) return false;
      bool halted = s.areas[*chosen - 1].status == SubAreaStatus::Halted;
      return halted == (a == 1);
    };
    bool c1 = consistent(1);
    bool c0 = consistent(0);
    if (!c1 && !c0) return {0, "self-undefined"};
    if (c1 && !c0)
      return {second.status == SubAreaStatus::Halted ? 1 : 0, "self-assume-1"};
    if (c0 && !c1)
      return {third.status == SubAreaStatus::Halted ? 1 : 0, "self-assume-0"};
    return {0, "self-ambiguous"};
  }

  // Not the diagonal case: give the pending oracle w further steps and see
  // whether it settles which of the two speculations was real.
  const OracleJob* job = nullptr;
  if (second.parent && s.areas[*second.parent - 1].job)
    job = &s.jobs[*s.areas[*second.parent - 1].job];
  if (!job || job->state == OracleJob::State::Failed) return {0, "no-pending-oracle"};

  bool truth;
  if (job->state == OracleJob::State::Resolved) {
    truth = *job->truth;
  } else {
    RunResult r = run_from(job->callee_config, *job->callee, w);
    if (!r.halted) return {0, "oracle-unresolved-after-w"};
    truth = eval_relation(job->oracle.relation,
                          tape_output_tokens(r.final_config.tape2, *job->callee),
                          s.program.tokens_of(job->oracle.threshold));
  }
  const SubArea* chosen = nullptr;
  for (const SubArea* a : {&second, &third})
    if (a->assumption && *a->assumption == truth) chosen = a;
  if (!chosen) return {0, "no-consistent-sub-area"};
  return {chosen->status == SubAreaStatus::Halted ? 1 : 0, "post-w-resolution"};
}

MachineSpec build_program_y(const std::string& u_name, const MachineRegistry& registry) {
  if (!registry.contains(u_name))
    fail(Errc::UnknownMachine, "program y needs '" + u_name + "' registered");

  RawMachine raw;
  raw.name = "y";
  raw.states = {"y0", "yr", "l0", "l1", "ya"};
  raw.blank = "_";
  raw.alphabet = {"_", "0", "1"};
  raw.start = "y0";
  raw.accepting = {"ya"};
  // if u(i,i) == 0: return 1. else: loop forever. The input i is carried by
  // the oracle reference; the tape stays blank at desk scale.
  raw.oracles.push_back(RawOracle{"y0", "==", u_name, "0", "yr", "l0"});
  raw.rules.push_back(RawRule{"yr", "_", "_", "ya", "1", "_", "N", "N"});
  raw.rules.push_back(RawRule{"l0", "_", "_", "l1", "_", "_", "N", "N"});
  raw.rules.push_back(RawRule{"l1", "_", "_", "l0", "_", "_", "N", "N"});
  return validate_spec(raw);
}

MachineSpec build_placeholder_u() {
  RawMachine raw;
  raw.name = "u";
  raw.states = {"u0", "u1"};
  raw.blank = "_";
  raw.alphabet = {"_", "0", "1"};
  raw.input_alphabet = {"0", "1"};
  raw.start = "u0";
  // Never halts on any input: the limit decider has no finite-stage answer.
  for (const std::string sym : {"_", "0", "1"}) {
    raw.rules.push_back(RawRule{"u0", sym, "_", "u1", sym, "_", "N", "N"});
    raw.rules.push_back(RawRule{"u1", sym, "_", "u0", sym, "_", "N", "N"});
  }
  return validate_spec(raw);
}

ProfileReport classify_halting_profile(const MachineSpec& p, std::span<const std::string> input,
                                       const MachineRegistry& registry, std::uint64_t fuel,
                                       std::uint64_t w) {
  ProfileReport report;
  RegistryResolver resolver(registry, fuel);
  RunResult r = run(p, input, fuel, &resolver);
  if (r.halted) {
    report.profile = HaltingProfile::Condition1;
    report.halt_step = r.steps_used.finite_part;
    return report;
  }
  if (!r.blocked_on_oracle) return report;  // ran out of fuel mid-flight: unknown

  const OracleIf& oracle = p.oracles()[*r.blocking_oracle];
  report.oracle_state = p.state_name(oracle.at_state);
  if (w == 0) return report;  // evidence gathering disabled

  auto probe = [&](bool assumption) {
    Configuration c = r.final_config;
    c.state = assumption ? oracle.true_state : oracle.false_state;
    ++c.steps.finite_part;
    std::uint64_t base = c.steps.finite_part;
    RunResult suffix = run_from(std::move(c), p, w, &resolver);
    SuffixEvidence ev;
    ev.halted_within_w = suffix.halted;
    ev.steps = suffix.halted ? suffix.steps_used.finite_part - base : w;
    return ev;
  };
  report.true_branch = probe(true);
  report.false_branch = probe(false);
  if (report.true_branch->halted_within_w || report.false_branch->halted_within_w)
    report.profile = HaltingProfile::Condition2Evidence;
  return report;
}

std::string profile_report_to_json(const ProfileReport& r) {
  nlohmann::ordered_json j;
  j["profile"] = halting_profile_name(r.profile);
  if (r.halt_step) j["halt_step"] = *r.halt_step;
  if (r.oracle_state) j["oracle_state"] = *r.oracle_state;
  auto branch = [](const std::optional<SuffixEvidence>& ev) -> nlohmann::ordered_json {
    if (!ev) return nullptr;
    nlohmann::ordered_json b;
    b["halted_within_w"] = ev->halted_within_w;
    if (ev->halted_within_w)
      b["steps"] = ev->steps;
    else
      b["excluded_by_w_bound"] = true;
    return b;
  };
  if (r.oracle_state) {
    j["true_branch"] = branch(r.true_branch);
    j["false_branch"] = branch(r.false_branch);
  }
  return j.dump();
}

ParadoxReport paradox_report(std::uint64_t fuel, std::uint64_t w) {
  MachineRegistry registry;
  registry.add(build_placeholder_u());
  MachineSpec y = build_program_y("u", registry);

  ParadoxReport report;
  report.fuel = fuel;
  report.w = w;
  for (int assumption : {0, 1}) {
    StubResolver stub;
    stub.set_output("u", {assumption == 0 ? "0" : "1"});
    RunResult r = run(y, {}, fuel, &stub);

    ParadoxRow row;
    row.assumption = assumption;
    row.halted = r.halted;
    row.steps = r.halted ? r.steps_used.finite_part : fuel;
    // assumption 0 claims y(y) never halts; assumption 1 claims it does
    row.consistent = (assumption == 1) == r.halted;
    if (assumption == 0)
      row.detail = r.halted ? "assumed never to halt, yet the accept path halts at step " +
                                  std::to_string(row.steps)
                            : "assumed never to halt and did not halt";
    else
      row.detail = r.halted
                       ? "assumed to halt and halted"
                       : "assumed to halt, yet the loop outlives every budget (" +
                             std::to_string(fuel) + " steps)";
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string paradox_report_to_json(const ParadoxReport& r) {
  nlohmann::ordered_json j;
  j["fuel"] = r.fuel;
  j["w"] = r.w;
  j["rows"] = nlohmann::ordered_json::array();
  for (const ParadoxRow& row : r.rows) {
    nlohmann::ordered_json rj;
    rj["assumption"] = row.assumption;
    rj["halted"] = row.halted;
    rj["steps"] = row.steps;
    rj["consistent"] = row.consistent;
    rj["detail"] = row.detail;
    j["rows"].push_back(std::move(rj));
  }
  return j.dump();
}

}  // namespace zenosim
