#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "zenosim/counter.hpp"
#include "zenosim/machine.hpp"
#include "zenosim/ordinal.hpp"
#include "zenosim/zeno_clock.hpp"

namespace zenosim {

enum class VerdictMode { Concrete, SymbolicLimit };

// Output of the Zeno halting procedure. bit=1 is a concrete observation
// (the simulated machine reached a halt at a finite step); bit=0 exists
// only as the symbolic limit stage, where the counter has been driven to
// its w-state and reads 0.
struct HaltVerdict {
  int bit = 0;
  VerdictMode mode = VerdictMode::Concrete;
  OrdinalTime steps_used;
  HalvingCounter counter = HalvingCounter::init();
  Rational wall_clock;             // observer frame
  StepKind halt_kind = StepKind::Continued;  // AcceptHalt/StuckHalt when bit=1
};

// A finite run that neither halted nor took the limit: the plain-TM mode,
// where "didn't halt within fuel" is all we may claim.
struct ZenoExhausted {
  Configuration config;
  HalvingCounter counter = HalvingCounter::init();
};

using ZenoOutcome = std::variant<HaltVerdict, ZenoExhausted>;

// One round per machine step: execute the step, check for a halt, halve
// the counter. The halving is skipped on the halting round, so a machine
// halting at step n returns with n-1 completed halvings. After `fuel`
// rounds without a halt the limit stage (when enabled) stands in for the
// w-th step: counter at its limit, verdict bit 0, observer clock at the
// full 2*mu0.
ZenoOutcome zeno_halt_check(const MachineSpec& m, std::span<const std::string> input,
                            std::uint64_t fuel, bool limit_stage = true,
                            const ZenoSchedule& schedule = {},
                            OracleResolver* resolver = nullptr);

// Every verdict carries a definite bit with a consistent mode; this is the
// machine-checkable form of "the algorithm always gives an output".
bool verdict_total(const HaltVerdict& v);

std::string verdict_to_json(const HaltVerdict& v);

}  // namespace zenosim
