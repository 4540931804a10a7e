#pragma once

#include <cstdint>
#include <string>

#include "zenosim/error.hpp"
#include "zenosim/ordinal.hpp"
#include "zenosim/rational.hpp"

namespace zenosim {

// Tape-backed repeated halving of 1, in the base-2 convention where the
// leftmost digit is the 2^0 place: 1, 01, 001, ... Each halving appends the
// shifted number to the history tape after a blank separator, so after n
// halvings segment k (k <= n) reads as k zeros followed by a single 1.
//
// Because every segment is fully determined by its index, the counter
// stores only the division ordinal and materializes digit strings on
// demand. Materializing the literal cell history would cost O(n^2) cells
// (n = 10^5 is in scope); the append-only layout stays observable through
// history_segment() and separator_count().
//
// The w-limit is an explicit symbolic operation: no finite run reaches it.
// At the limit the infinite block of zeros is truncated to a single "0"
// and further halvings (w+1, w+2, ...) leave that digit string unchanged,
// which is what makes the w / w+1 comparison an infinity detector.
class HalvingCounter {
 public:
  static HalvingCounter init() { return HalvingCounter{finite_ord(0)}; }

  const OrdinalTime& divisions() const { return divisions_; }
  bool at_limit() const { return divisions_.omega_coeff >= 1; }

  HalvingCounter halve() const {
    if (at_limit()) fail(Errc::LimitReached, "cannot halve at the limit; use halve_past_limit");
    return HalvingCounter{finite_ord(divisions_.finite_part + 1)};
  }

  HalvingCounter take_limit() const {
    if (at_limit()) fail(Errc::LimitReached, "already at the limit");
    return HalvingCounter{omega_ord()};
  }

  HalvingCounter halve_past_limit() const {
    if (!at_limit()) fail(Errc::NotAtLimit, "halve_past_limit requires a limit counter");
    return HalvingCounter{OrdinalTime{divisions_.omega_coeff, divisions_.finite_part + 1}};
  }

  // Digit string of the newest segment: n zeros then "1", or "0" at the
  // limit (and beyond: losing one of infinitely many zeros changes nothing).
  std::string current() const {
    if (at_limit()) return "0";
    return std::string(divisions_.finite_part, '0') + "1";
  }

  int last_digit() const { return at_limit() ? 0 : 1; }

  Rational value() const {
    if (at_limit()) return Rational(0);
    return pow2(-static_cast<std::int64_t>(divisions_.finite_part));
  }

  // Segment k of the history tape, 0 <= k <= divisions (finite counters).
  std::string history_segment(std::uint64_t k) const {
    if (at_limit() || k > divisions_.finite_part)
      fail(Errc::BadArgument, "history segment index out of range");
    return std::string(k, '0') + "1";
  }

  // One blank separator per halving performed.
  std::uint64_t separator_count() const {
    if (at_limit()) fail(Errc::BadArgument, "history of a limit counter is not finitely indexed");
    return divisions_.finite_part;
  }

  std::uint64_t segment_count() const { return separator_count() + 1; }

  // "001@2", "0@w*1+0"
  std::string render() const { return current() + "@" + to_string(divisions_); }

  friend bool operator==(const HalvingCounter&, const HalvingCounter&) = default;

 private:
  explicit HalvingCounter(OrdinalTime d) : divisions_(d) {}

  OrdinalTime divisions_;
};

enum class CounterCompare { Equal, Unequal };

// Digit-by-digit comparison of the current segments from the leftmost
// digit. Finite counters are equal iff they have halved equally often; the
// limit segment "0" equals itself at every post-limit ordinal, so a counter
// can recognize that it has run for infinite time by comparing the w-th and
// w+1-th results.
inline CounterCompare compare_counters(const HalvingCounter& a, const HalvingCounter& b) {
  if (a.at_limit() && b.at_limit()) return CounterCompare::Equal;
  if (a.at_limit() != b.at_limit()) return CounterCompare::Unequal;
  return a.divisions() == b.divisions() ? CounterCompare::Equal : CounterCompare::Unequal;
}

}  // namespace zenosim
