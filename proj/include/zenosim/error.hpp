#pragma once

#include <stdexcept>
#include <string>

namespace zenosim {

enum class Errc {
  // machine validation
  BlankInInput,
  RuleFromAccepting,
  UnknownSymbol,
  UnknownState,
  DuplicateRule,
  InputSymbolNotInSigma,
  // program format
  SyntaxError,
  DecodeError,
  // universal-sim
  NotRightMover,
  FuelTooSmall,
  AlphabetMismatch,
  // halving counter
  LimitReached,
  NotAtLimit,
  // dovetail
  UnknownMachine,
  MalformedState,
  // generic misuse
  BadArgument,
};

const char* errc_name(Errc c);

// Single exception type for the whole library. `line` is 0 when the error
// has no source location (programmatic construction, arithmetic misuse).
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message, int line = 0)
      : std::runtime_error(line > 0
                               ? "line " + std::to_string(line) + ": " + message
                               : std::move(message)),
        code_(code),
        line_(line) {}

  Errc code() const { return code_; }
  int line() const { return line_; }

 private:
  Errc code_;
  int line_;
};

[[noreturn]] inline void fail(Errc code, std::string message, int line = 0) {
  throw Error(code, std::move(message), line);
}

}  // namespace zenosim
