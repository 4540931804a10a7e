#pragma once

#include <cstdint>

#include "zenosim/error.hpp"
#include "zenosim/rational.hpp"

namespace zenosim {

// Observer-frame schedule of a Zeno machine: the first step takes mu0
// seconds and every following step takes half of the previous one. The
// ratio is part of the model, not a parameter.
struct ZenoSchedule {
  Rational initial_duration = 1;  // mu0, seconds

  ZenoSchedule() = default;
  explicit ZenoSchedule(Rational mu0) : initial_duration(std::move(mu0)) {
    if (initial_duration <= 0) fail(Errc::BadArgument, "mu0 must be positive");
  }
};

// Duration of step k (1-based): mu0 * 2^(1-k).
inline Rational step_duration(std::uint64_t k, const ZenoSchedule& s = {}) {
  if (k == 0) fail(Errc::BadArgument, "steps are numbered from 1");
  return s.initial_duration * pow2(1 - static_cast<std::int64_t>(k));
}

// Elapsed observer time after n steps: mu0 * (2 - 2^(1-n)). The n = 0 case
// falls out of the same formula (2 - 2 = 0).
inline Rational wall_time(std::uint64_t n, const ZenoSchedule& s = {}) {
  return s.initial_duration * (Rational(2) - pow2(1 - static_cast<std::int64_t>(n)));
}

// Supremum of wall_time over all n: the whole w-sequence of steps fits in
// 2*mu0 seconds of observer time.
inline Rational wall_time_limit(const ZenoSchedule& s = {}) {
  return 2 * s.initial_duration;
}

}  // namespace zenosim
