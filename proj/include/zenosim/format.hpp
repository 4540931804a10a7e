#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zenosim/machine.hpp"

namespace zenosim {

// One machine plus, when the document carries a `tape1:` line, its input.
struct ParsedProgram {
  MachineSpec machine;
  std::optional<std::vector<std::string>> input;
};

// Line-oriented `.tm` grammar. `#` starts a comment, tokens are separated
// by whitespace, and every token must be printable ASCII (the universal
// encoding is 7-bit per character). The document starts with `machine
// <name>` and finishes with `end`; in between:
//
//   states: q0 q1 ...
//   blank: _                    (optional, defaults to _)
//   alphabet: _ 0 1             (blank is implied if missing)
//   input: 0 1                  (sigma; optional, defaults to empty)
//   start: q0
//   accept: qa ...
//   rule: <q> <r1> <r2> -> <q'> <w1> <w2> <M1> <M2>     with M in {L,N,R}
//   oracle: <q> if <rel> <machine> <k> then <qT> else <qF>
//   tape1: 1 0 1                (the input word, optional)
//
// The oracle threshold <k> is one token read as a string of
// single-character symbols.
ParsedProgram parse_program(const std::string& text);

// Canonical rendering: fixed section order, rules and oracles sorted
// lexicographically by their rendered line, optional sections omitted when
// empty. parse_program(serialize_program(m, i)) reproduces (m, i) exactly.
std::string serialize_program(const MachineSpec& m,
                              const std::optional<std::vector<std::string>>& input = std::nullopt);

// Machine + input flattened to symbols of the universal alphabet {0,1,#}:
// the canonical text, seven bits per character (most significant first),
// each character record closed by '#'. Trivially decodable by design.
struct EncodedMachine {
  std::string symbols;
  friend bool operator==(const EncodedMachine&, const EncodedMachine&) = default;
};

EncodedMachine encode_for_universal(const MachineSpec& m,
                                    const std::optional<std::vector<std::string>>& input = std::nullopt);

ParsedProgram decode_universal(const EncodedMachine& e);

}  // namespace zenosim
