#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "zenosim/error.hpp"

namespace zenosim {

// All durations and counter values in this project are exact rationals.
// The geometric identities the test suite checks (2 - 2^(1-n), 2^(-n))
// hold with zero tolerance only in exact arithmetic, so floating point is
// banned from the library surface.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// 2^e for any integer e, including negative exponents.
inline Rational pow2(std::int64_t e) {
  if (e >= 0) return Rational(BigInt(1) << static_cast<unsigned>(e));
  return Rational(BigInt(1), BigInt(1) << static_cast<unsigned>(-e));
}

// Canonical rendering: "7/4", or just "2" when the denominator is 1.
inline std::string to_fraction_string(const Rational& r) {
  std::string num = numerator(r).str();
  if (denominator(r) == 1) return num;
  return num + "/" + denominator(r).str();
}

// Accepts "p", "p/q" or "-p/q"; used for --mu0 style options.
inline Rational parse_fraction(std::string_view text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string_view::npos) return Rational(BigInt(std::string(text)));
    BigInt num{std::string(text.substr(0, slash))};
    BigInt den{std::string(text.substr(slash + 1))};
    if (den == 0) fail(Errc::BadArgument, "zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(Errc::BadArgument, "not a rational: '" + std::string(text) + "'");
  }
}

}  // namespace zenosim
