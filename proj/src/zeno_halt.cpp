#include "zenosim/zeno_halt.hpp"

#include <nlohmann/json.hpp>

namespace zenosim {

namespace {

HaltVerdict concrete_verdict(const Configuration& c, StepKind kind,
                             const HalvingCounter& counter, const ZenoSchedule& schedule) {
  HaltVerdict v;
  v.bit = 1;
  v.mode = VerdictMode::Concrete;
  v.steps_used = c.steps;
  v.counter = counter;
  v.wall_clock = wall_time(c.steps.finite_part, schedule);
  v.halt_kind = kind;
  return v;
}

}  // namespace

ZenoOutcome zeno_halt_check(const MachineSpec& m, std::span<const std::string> input,
                            std::uint64_t fuel, bool limit_stage,
                            const ZenoSchedule& schedule, OracleResolver* resolver) {
  if (fuel == 0) fail(Errc::BadArgument, "fuel must be at least 1");

  Configuration c = initial_config(m, input);
  HalvingCounter counter = HalvingCounter::init();
  const bool oracles_live = m.has_oracles();

  if (auto kind = halted_now(c, m, oracles_live))
    return concrete_verdict(c, *kind, counter, schedule);

  for (std::uint64_t round = 1; round <= fuel; ++round) {
    OracleStepResult r = step_with_oracles(c, m, resolver);
    if (!r.blocked) {
      // halted_now above / below keeps this outcome Continued
      c = std::move(r.config);
      if (auto kind = halted_now(c, m, oracles_live))
        return concrete_verdict(c, *kind, counter, schedule);
    }
    // A blocked round is the oracle's own computation making progress; the
    // configuration is unchanged but the round still happened.
    counter = counter.halve();
  }

  if (!limit_stage) return ZenoExhausted{std::move(c), std::move(counter)};

  HaltVerdict v;
  v.bit = 0;
  v.mode = VerdictMode::SymbolicLimit;
  v.steps_used = omega_ord();
  v.counter = counter.take_limit();
  v.wall_clock = wall_time_limit(schedule);
  return v;
}

bool verdict_total(const HaltVerdict& v) {
  if (v.bit == 1)
    return v.mode == VerdictMode::Concrete && v.steps_used.is_finite() &&
           (v.halt_kind == StepKind::AcceptHalt || v.halt_kind == StepKind::StuckHalt);
  return v.bit == 0 && v.mode == VerdictMode::SymbolicLimit && v.counter.at_limit();
}

std::string verdict_to_json(const HaltVerdict& v) {
  nlohmann::ordered_json j;
  j["bit"] = v.bit;
  j["mode"] = v.mode == VerdictMode::Concrete ? "concrete" : "symbolic-limit";
  j["steps"] = to_string(v.steps_used);
  j["counter"] = v.counter.render();
  j["wall_clock"] = to_fraction_string(v.wall_clock);
  return j.dump();
}

}  // namespace zenosim
