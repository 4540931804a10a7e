#include "zenosim/universal.hpp"

#include <algorithm>
#include <set>

namespace zenosim {

RunResult simulate(const EncodedMachine& e, std::uint64_t fuel) {
  ParsedProgram p = decode_universal(e);
  std::vector<std::string> input = p.input.value_or(std::vector<std::string>{});
  return run(p.machine, input, fuel);
}

bool Dfa::accepts(std::span<const std::string> word) const {
  std::size_t state = start;
  for (const auto& tok : word) {
    auto it = std::find(alphabet.begin(), alphabet.end(), tok);
    if (it == alphabet.end()) return false;
    state = next[state][static_cast<std::size_t>(it - alphabet.begin())];
  }
  return accepting[state];
}

bool is_right_mover(const MachineSpec& m) {
  if (m.has_oracles()) return false;
  for (const auto& [lhs, rhs] : m.rules()) {
    if (rhs.write1 != lhs.read1 || rhs.write2 != lhs.read2) return false;
    if (rhs.move1 != Move::Right || rhs.move2 != Move::None) return false;
  }
  return true;
}

bool right_mover_accepts(const MachineSpec& m, std::span<const std::string> word) {
  Configuration c = initial_config(m, word);
  for (std::size_t t = 0; t <= word.size() + 1; ++t) {
    if (m.is_accepting(c.state)) return true;
    if (t == word.size() + 1) break;
    StepResult r = step(c, m);
    if (r.outcome != StepKind::Continued) return false;
    c = std::move(r.config);
  }
  return false;
}

Dfa right_mover_to_dfa(const MachineSpec& m) {
  if (!is_right_mover(m))
    fail(Errc::NotRightMover, "machine '" + m.name() + "' is not a read-only right mover");

  const SymbolId blank = m.blank();
  const auto& sigma = m.input_alphabet();
  const std::size_t nsym = sigma.size();
  const std::size_t dead = m.state_count();  // rejecting sink, pruned if unreachable

  // Full transition table over machine states; accepting states absorb
  // (the machine has already halted, the rest of the word is irrelevant).
  auto target = [&](StateId q, SymbolId a) -> std::size_t {
    if (m.is_accepting(q)) return q;
    const RuleRhs* rule = m.find_rule(q, a, blank);
    return rule ? rule->next : dead;
  };
  auto accepts_state = [&](StateId q) {
    if (m.is_accepting(q)) return true;
    const RuleRhs* blank_rule = m.find_rule(q, blank, blank);
    return blank_rule && m.is_accepting(blank_rule->next);
  };

  // Keep only what is reachable from the start over sigma.
  std::vector<std::size_t> order;
  std::vector<std::size_t> renumber(m.state_count() + 1, SIZE_MAX);
  order.push_back(m.start());
  renumber[m.start()] = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] == dead) continue;
    for (std::size_t a = 0; a < nsym; ++a) {
      std::size_t t = target(static_cast<StateId>(order[i]), sigma[a]);
      if (renumber[t] == SIZE_MAX) {
        renumber[t] = order.size();
        order.push_back(t);
      }
    }
  }

  Dfa d;
  d.alphabet = m.tokens_of(sigma);
  d.start = 0;
  d.next.resize(order.size(), std::vector<std::size_t>(nsym));
  d.accepting.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] == dead) {
      std::fill(d.next[i].begin(), d.next[i].end(), i);
      d.accepting[i] = false;
      continue;
    }
    for (std::size_t a = 0; a < nsym; ++a)
      d.next[i][a] = renumber[target(static_cast<StateId>(order[i]), sigma[a])];
    d.accepting[i] = accepts_state(static_cast<StateId>(order[i]));
  }
  return d;
}

std::vector<std::string> LangAcceptor::alphabet() const {
  if (std::holds_alternative<const MachineSpec*>(v_)) {
    const MachineSpec* m = std::get<const MachineSpec*>(v_);
    return m->tokens_of(m->input_alphabet());
  }
  return std::get<const Dfa*>(v_)->alphabet;
}

bool LangAcceptor::accepts(std::span<const std::string> word, std::uint64_t fuel) const {
  if (std::holds_alternative<const Dfa*>(v_))
    return std::get<const Dfa*>(v_)->accepts(word);

  const MachineSpec* m = std::get<const MachineSpec*>(v_);
  if (is_right_mover(*m)) return right_mover_accepts(*m, word);
  RunResult r = run(*m, word, fuel);
  if (!r.halted)
    fail(Errc::FuelTooSmall, "machine '" + m->name() + "' ran past fuel on a word of length " +
                                 std::to_string(word.size()));
  return r.outcome == StepKind::AcceptHalt;
}

EquivResult language_equiv_bounded(const LangAcceptor& a, const LangAcceptor& b,
                                   std::size_t max_len, std::uint64_t fuel) {
  std::vector<std::string> alpha = a.alphabet();
  std::vector<std::string> alpha_b = b.alphabet();
  std::sort(alpha.begin(), alpha.end());
  std::sort(alpha_b.begin(), alpha_b.end());
  if (alpha != alpha_b)
    fail(Errc::AlphabetMismatch, "the two acceptors use different input alphabets");

  std::vector<std::string> word;
  // Depth-first in lexicographic order within each length = length-then-lex
  // overall when lengths are swept outermost.
  for (std::size_t len = 0; len <= max_len; ++len) {
    if (alpha.empty() && len > 0) break;  // only the empty word exists
    std::vector<std::size_t> idx(len, 0);
    while (true) {
      word.clear();
      for (std::size_t i : idx) word.push_back(alpha[i]);
      if (a.accepts(word, fuel) != b.accepts(word, fuel))
        return {false, word};
      // next word of this length
      std::size_t pos = len;
      while (pos > 0 && idx[pos - 1] + 1 == alpha.size()) idx[--pos] = 0;
      if (pos == 0) break;
      ++idx[pos - 1];
    }
  }
  return {};
}

}  // namespace zenosim
