#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace zenosim {

// Ordinal values of the form w*a + n, which is all the transfinite time
// accounting here ever needs: a concrete run has a = 0, one limit stage has
// a = 1, and the dovetailing argument tops out at w*2 + k. Values are kept
// in normal form by construction (there is no alternative representation of
// the same ordinal with these two fields).
struct OrdinalTime {
  std::uint64_t omega_coeff = 0;
  std::uint64_t finite_part = 0;

  friend bool operator==(const OrdinalTime&, const OrdinalTime&) = default;
  // Lexicographic on (omega_coeff, finite_part) is exactly ordinal order
  // on this fragment.
  friend std::strong_ordering operator<=>(const OrdinalTime&, const OrdinalTime&) = default;

  bool is_finite() const { return omega_coeff == 0; }
};

inline OrdinalTime finite_ord(std::uint64_t n) { return {0, n}; }
inline OrdinalTime omega_ord(std::uint64_t a = 1, std::uint64_t n = 0) { return {a, n}; }

// Ordinal addition restricted to the w*a+n fragment. Left finite parts are
// absorbed by a limit ordinal on the right: (w*a+j) + (w*b+k) = w*(a+b)+k
// when b >= 1. Not commutative: 1 + w = w, but w + 1 > w.
inline OrdinalTime ord_add(const OrdinalTime& x, const OrdinalTime& y) {
  if (y.omega_coeff >= 1) return {x.omega_coeff + y.omega_coeff, y.finite_part};
  return {x.omega_coeff, x.finite_part + y.finite_part};
}

inline std::strong_ordering ord_compare(const OrdinalTime& x, const OrdinalTime& y) {
  return x <=> y;
}

// "5" for finite values, "w*a+n" otherwise (the finite part is always
// printed, so the first limit ordinal renders as "w*1+0").
inline std::string to_string(const OrdinalTime& t) {
  if (t.is_finite()) return std::to_string(t.finite_part);
  return "w*" + std::to_string(t.omega_coeff) + "+" + std::to_string(t.finite_part);
}

// A transfinite running-time bound: the `necessary` ordinal is always
// consumed, and `finite_slack` records a "plus some finite time" allowance.
// O(w) is {w*1+0, slack}.
struct OrdinalBound {
  OrdinalTime necessary;
  bool finite_slack = true;

  friend bool operator==(const OrdinalBound&, const OrdinalBound&) = default;
};

inline OrdinalBound big_o_omega(std::uint64_t a = 1) { return {omega_ord(a), true}; }

inline OrdinalBound bound_add(const OrdinalBound& p, const OrdinalBound& q) {
  return {ord_add(p.necessary, q.necessary), p.finite_slack || q.finite_slack};
}

inline std::string to_string(const OrdinalBound& b) {
  if (b.finite_slack) return "O(" + to_string(b.necessary) + ")";
  return to_string(b.necessary);
}

}  // namespace zenosim
