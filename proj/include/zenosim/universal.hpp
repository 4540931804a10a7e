#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "zenosim/format.hpp"
#include "zenosim/machine.hpp"

namespace zenosim {

// Runs an encoded machine by decoding it and interpreting the result. That
// is all simulation-ability requires, and it is checkable step-for-step
// against the direct run; no claim is made about a concrete universal
// transition table's state count.
RunResult simulate(const EncodedMachine& e, std::uint64_t fuel);

struct Dfa {
  std::vector<std::string> alphabet;
  std::size_t start = 0;
  std::vector<std::vector<std::size_t>> next;  // [state][alphabet index]
  std::vector<bool> accepting;

  std::size_t state_count() const { return next.size(); }
  bool accepts(std::span<const std::string> word) const;
};

// True iff every rule writes back what it read on both tapes, never moves
// the second head, and moves the first head only right. Machines with
// oracle branches do not qualify.
bool is_right_mover(const MachineSpec& m);

// A pure right-mover sees each input cell once and at most one blank after
// the word, so it accepts a word w exactly when it reaches an accepting
// state within |w|+1 steps. That convention makes its language regular:
// DFA states are the machine states reachable on input symbols, a state
// accepts if it is accepting or one blank-step away from an accepting
// state, and missing rules fall into a rejecting sink.
Dfa right_mover_to_dfa(const MachineSpec& m);

// Acceptance of a word under the right-mover convention above.
bool right_mover_accepts(const MachineSpec& m, std::span<const std::string> word);

// Either side of a bounded language-equivalence check.
class LangAcceptor {
 public:
  LangAcceptor(const MachineSpec& m) : v_(&m) {}
  LangAcceptor(const Dfa& d) : v_(&d) {}

  std::vector<std::string> alphabet() const;
  // Acceptance: DFAs walk the word; right-movers use the |w|+1-step scan
  // convention (so a converted DFA is compared against the same notion it
  // was built from); general machines run until they halt, and a run that
  // exhausts `fuel` makes the verdict unsound (FuelTooSmall).
  bool accepts(std::span<const std::string> word, std::uint64_t fuel) const;

 private:
  std::variant<const MachineSpec*, const Dfa*> v_;
};

struct EquivResult {
  bool equivalent = true;
  std::vector<std::string> counterexample;  // shortest, then lexicographically first
};

// Exhaustively compares acceptance on every word of length <= max_len over
// the shared alphabet, in length order with symbols sorted by token, so
// the reported counterexample is deterministic and argument-symmetric.
EquivResult language_equiv_bounded(const LangAcceptor& a, const LangAcceptor& b,
                                   std::size_t max_len, std::uint64_t fuel);

}  // namespace zenosim
