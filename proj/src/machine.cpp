#include "zenosim/machine.hpp"

#include <algorithm>
#include <sstream>

namespace zenosim {

const char* relation_token(Relation r) {
  switch (r) {
    case Relation::Eq: return "==";
    case Relation::Le: return "<=";
    case Relation::Ge: return ">=";
    case Relation::Lt: return "<";
    case Relation::Gt: return ">";
  }
  return "?";
}

std::optional<Relation> parse_relation(std::string_view token) {
  if (token == "==") return Relation::Eq;
  if (token == "<=") return Relation::Le;
  if (token == ">=") return Relation::Ge;
  if (token == "<") return Relation::Lt;
  if (token == ">") return Relation::Gt;
  return std::nullopt;
}

const char* step_kind_name(StepKind k) {
  switch (k) {
    case StepKind::Continued: return "continued";
    case StepKind::AcceptHalt: return "accept";
    case StepKind::StuckHalt: return "stuck";
  }
  return "?";
}

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::BlankInInput: return "BlankInInput";
    case Errc::RuleFromAccepting: return "RuleFromAccepting";
    case Errc::UnknownSymbol: return "UnknownSymbol";
    case Errc::UnknownState: return "UnknownState";
    case Errc::DuplicateRule: return "DuplicateRule";
    case Errc::InputSymbolNotInSigma: return "InputSymbolNotInSigma";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::DecodeError: return "DecodeError";
    case Errc::NotRightMover: return "NotRightMover";
    case Errc::FuelTooSmall: return "FuelTooSmall";
    case Errc::AlphabetMismatch: return "AlphabetMismatch";
    case Errc::LimitReached: return "LimitReached";
    case Errc::NotAtLimit: return "NotAtLimit";
    case Errc::UnknownMachine: return "UnknownMachine";
    case Errc::MalformedState: return "MalformedState";
    case Errc::BadArgument: return "BadArgument";
  }
  return "Error";
}

std::optional<StateId> MachineSpec::find_state(std::string_view token) const {
  for (StateId q = 0; q < state_names_.size(); ++q)
    if (state_names_[q] == token) return q;
  return std::nullopt;
}

std::optional<SymbolId> MachineSpec::find_symbol(std::string_view token) const {
  for (SymbolId s = 0; s < symbol_names_.size(); ++s)
    if (symbol_names_[s] == token) return s;
  return std::nullopt;
}

const OracleIf* MachineSpec::oracle_at(StateId q) const {
  auto it = oracle_index_.find(q);
  return it == oracle_index_.end() ? nullptr : &oracles_[it->second];
}

std::vector<std::string> MachineSpec::tokens_of(std::span<const SymbolId> symbols) const {
  std::vector<std::string> out;
  out.reserve(symbols.size());
  for (SymbolId s : symbols) out.push_back(symbol_names_[s]);
  return out;
}

namespace {

std::optional<Move> parse_move(const std::string& token) {
  if (token == "L") return Move::Left;
  if (token == "N") return Move::None;
  if (token == "R") return Move::Right;
  return std::nullopt;
}

}  // namespace

MachineSpec validate_spec(const RawMachine& raw) {
  MachineSpec m;
  m.name_ = raw.name;

  if (raw.states.empty()) fail(Errc::UnknownState, "machine has no states");
  for (const auto& s : raw.states) {
    if (std::find(m.state_names_.begin(), m.state_names_.end(), s) != m.state_names_.end())
      fail(Errc::BadArgument, "state '" + s + "' declared twice");
    m.state_names_.push_back(s);
  }

  for (const auto& s : raw.alphabet) {
    if (std::find(m.symbol_names_.begin(), m.symbol_names_.end(), s) != m.symbol_names_.end())
      fail(Errc::BadArgument, "symbol '" + s + "' declared twice");
    m.symbol_names_.push_back(s);
  }
  // The blank belongs to gamma by definition; accept descriptions that
  // leave it off the alphabet line.
  auto blank_it = std::find(m.symbol_names_.begin(), m.symbol_names_.end(), raw.blank);
  if (blank_it == m.symbol_names_.end()) {
    m.symbol_names_.push_back(raw.blank);
    m.blank_ = static_cast<SymbolId>(m.symbol_names_.size() - 1);
  } else {
    m.blank_ = static_cast<SymbolId>(blank_it - m.symbol_names_.begin());
  }

  auto need_state = [&](const std::string& token, int line) -> StateId {
    auto q = m.find_state(token);
    if (!q) fail(Errc::UnknownState, "unknown state '" + token + "'", line);
    return *q;
  };
  auto need_symbol = [&](const std::string& token, int line) -> SymbolId {
    auto s = m.find_symbol(token);
    if (!s) fail(Errc::UnknownSymbol, "unknown symbol '" + token + "'", line);
    return *s;
  };

  m.sigma_mask_.assign(m.symbol_names_.size(), false);
  for (const auto& tok : raw.input_alphabet) {
    SymbolId s = need_symbol(tok, 0);
    if (s == m.blank_) fail(Errc::BlankInInput, "blank symbol '" + tok + "' listed in the input alphabet");
    if (m.sigma_mask_[s]) fail(Errc::BadArgument, "input symbol '" + tok + "' listed twice");
    m.sigma_mask_[s] = true;
    m.input_alphabet_.push_back(s);
  }

  if (raw.start.empty()) fail(Errc::UnknownState, "missing start state");
  m.start_ = need_state(raw.start, 0);

  m.accepting_mask_.assign(m.state_names_.size(), false);
  for (const auto& tok : raw.accepting) {
    StateId q = need_state(tok, 0);
    if (m.accepting_mask_[q]) fail(Errc::BadArgument, "accepting state '" + tok + "' listed twice");
    m.accepting_mask_[q] = true;
    m.accepting_.push_back(q);
  }

  for (const auto& r : raw.rules) {
    StateId q = need_state(r.state, r.line);
    if (m.accepting_mask_[q])
      fail(Errc::RuleFromAccepting, "rule from accepting state '" + r.state + "'", r.line);
    RuleLhs lhs{q, need_symbol(r.read1, r.line), need_symbol(r.read2, r.line)};
    auto m1 = parse_move(r.move1);
    auto m2 = parse_move(r.move2);
    if (!m1 || !m2)
      fail(Errc::SyntaxError, "move must be one of L, N, R", r.line);
    RuleRhs rhs{need_state(r.next, r.line), need_symbol(r.write1, r.line),
                need_symbol(r.write2, r.line), *m1, *m2};
    if (!m.rules_.emplace(lhs, rhs).second)
      fail(Errc::DuplicateRule,
           "duplicate rule for (" + r.state + ", " + r.read1 + ", " + r.read2 + ")", r.line);
  }

  // Oracles are stored sorted by their state token so that a validated
  // machine round-trips through the canonical serialization unchanged.
  std::vector<const RawOracle*> raw_oracles;
  for (const auto& o : raw.oracles) raw_oracles.push_back(&o);
  std::sort(raw_oracles.begin(), raw_oracles.end(),
            [](const RawOracle* a, const RawOracle* b) { return a->at_state < b->at_state; });
  for (const RawOracle* op : raw_oracles) {
    const RawOracle& o = *op;
    OracleIf oif;
    oif.at_state = need_state(o.at_state, o.line);
    if (m.accepting_mask_[oif.at_state])
      fail(Errc::RuleFromAccepting, "oracle branch at accepting state '" + o.at_state + "'", o.line);
    auto rel = parse_relation(o.relation);
    if (!rel) fail(Errc::SyntaxError, "unknown relation '" + o.relation + "'", o.line);
    oif.relation = *rel;
    if (o.machine.empty()) fail(Errc::SyntaxError, "oracle machine name missing", o.line);
    oif.oracle_machine = o.machine;
    // The threshold token is a string of single-character symbols.
    for (char ch : o.threshold)
      oif.threshold.push_back(need_symbol(std::string(1, ch), o.line));
    oif.true_state = need_state(o.true_state, o.line);
    oif.false_state = need_state(o.false_state, o.line);

    // An oracle state owns its whole (state, *, *) family of left-hand
    // sides; plain rules there, or a second oracle, would be ambiguous.
    if (m.oracle_index_.count(oif.at_state))
      fail(Errc::DuplicateRule, "second oracle at state '" + o.at_state + "'", o.line);
    for (const auto& [lhs, rhs] : m.rules_)
      if (lhs.state == oif.at_state)
        fail(Errc::DuplicateRule, "state '" + o.at_state + "' has both rules and an oracle",
             o.line);
    m.oracle_index_[oif.at_state] = m.oracles_.size();
    m.oracles_.push_back(std::move(oif));
  }

  return m;
}

std::optional<std::int64_t> Tape::leftmost_nonblank() const {
  std::optional<std::int64_t> best;
  for (const auto& [i, s] : cells)
    if (!best || i < *best) best = i;
  return best;
}

std::optional<std::int64_t> Tape::rightmost_nonblank() const {
  std::optional<std::int64_t> best;
  for (const auto& [i, s] : cells)
    if (!best || i > *best) best = i;
  return best;
}

std::string Configuration::snapshot_key() const {
  std::ostringstream os;
  os << state << '|' << tape1.head << '|' << tape2.head;
  for (const Tape* t : {&tape1, &tape2}) {
    std::vector<std::pair<std::int64_t, SymbolId>> sorted(t->cells.begin(), t->cells.end());
    std::sort(sorted.begin(), sorted.end());
    os << '|';
    for (const auto& [i, s] : sorted) os << i << ':' << s << ',';
  }
  return os.str();
}

Configuration initial_config(const MachineSpec& m, std::span<const std::string> input) {
  Configuration c;
  c.state = m.start();
  c.tape1.blank = m.blank();
  c.tape2.blank = m.blank();
  std::int64_t i = 0;
  for (const auto& tok : input) {
    auto s = m.find_symbol(tok);
    if (!s || !m.in_sigma(*s))
      fail(Errc::InputSymbolNotInSigma, "input symbol '" + tok + "' not in the input alphabet");
    c.tape1.write_at(i++, *s);
  }
  return c;
}

StepResult step(const Configuration& c, const MachineSpec& m) {
  if (m.is_accepting(c.state)) return {c, StepKind::AcceptHalt};
  const RuleRhs* rule = m.find_rule(c.state, c.tape1.read(), c.tape2.read());
  if (!rule) return {c, StepKind::StuckHalt};

  Configuration n = c;
  n.tape1.write(rule->write1);
  n.tape2.write(rule->write2);
  auto shift = [](Tape& t, Move mv) {
    if (mv == Move::Left) --t.head;
    else if (mv == Move::Right) ++t.head;
  };
  shift(n.tape1, rule->move1);
  shift(n.tape2, rule->move2);
  n.state = rule->next;
  ++n.steps.finite_part;
  return {std::move(n), StepKind::Continued};
}

std::optional<StepKind> halted_now(const Configuration& c, const MachineSpec& m,
                                   bool treat_oracle_as_live) {
  if (m.is_accepting(c.state)) return StepKind::AcceptHalt;
  if (m.oracle_at(c.state))
    return treat_oracle_as_live ? std::nullopt : std::optional(StepKind::StuckHalt);
  if (m.find_rule(c.state, c.tape1.read(), c.tape2.read())) return std::nullopt;
  return StepKind::StuckHalt;
}

bool eval_relation(Relation r, std::span<const std::string> lhs,
                   std::span<const std::string> rhs) {
  auto eq = [&] { return std::equal(lhs.begin(), lhs.end(), rhs.begin(), rhs.end()); };
  auto lt = [&] {
    return std::lexicographical_compare(lhs.begin(), lhs.end(), rhs.begin(), rhs.end());
  };
  switch (r) {
    case Relation::Eq: return eq();
    case Relation::Lt: return lt();
    case Relation::Le: return lt() || eq();
    case Relation::Gt: return !lt() && !eq();
    case Relation::Ge: return !lt();
  }
  return false;
}

std::vector<std::string> oracle_argument(const Configuration& c, const MachineSpec& m) {
  std::vector<std::string> out;
  std::optional<std::int64_t> left, right;
  for (const auto& [i, s] : c.tape1.cells) {
    if (i >= c.tape1.head) continue;
    if (!left || i < *left) left = i;
    if (!right || i > *right) right = i;
  }
  if (!left) return out;
  for (std::int64_t i = *left; i <= *right; ++i)
    out.push_back(m.symbol_name(c.tape1.read_at(i)));
  return out;
}

std::vector<std::string> tape_output_tokens(const Tape& t, const MachineSpec& m) {
  std::vector<std::string> out;
  auto left = t.leftmost_nonblank();
  if (!left) return out;
  auto right = *t.rightmost_nonblank();
  for (std::int64_t i = *left; i <= right; ++i) out.push_back(m.symbol_name(t.read_at(i)));
  return out;
}

OracleStepResult step_with_oracles(const Configuration& c, const MachineSpec& m,
                                   OracleResolver* resolver) {
  if (m.is_accepting(c.state)) return {c, StepKind::AcceptHalt};
  if (const OracleIf* oracle = m.oracle_at(c.state)) {
    if (!resolver) return {c, StepKind::Continued, /*blocked=*/true};
    auto output = resolver->oracle_output(*oracle, oracle_argument(c, m));
    if (!output) return {c, StepKind::Continued, /*blocked=*/true};
    bool truth = eval_relation(oracle->relation, *output, m.tokens_of(oracle->threshold));
    Configuration n = c;
    n.state = truth ? oracle->true_state : oracle->false_state;
    ++n.steps.finite_part;  // the branch is one instruction
    return {std::move(n), StepKind::Continued, false, true, truth};
  }
  StepResult plain = step(c, m);
  return {std::move(plain.config), plain.outcome};
}

RunResult run_from(Configuration c, const MachineSpec& m, std::uint64_t fuel,
                   OracleResolver* resolver) {
  for (std::uint64_t i = 0; i < fuel; ++i) {
    OracleStepResult r = step_with_oracles(c, m, resolver);
    if (r.blocked) {
      RunResult out{false, StepKind::Continued, c.steps, std::move(c), true};
      auto it = m.oracle_at(out.final_config.state);
      out.blocking_oracle = static_cast<std::size_t>(it - m.oracles().data());
      return out;
    }
    if (r.outcome != StepKind::Continued)
      return {true, r.outcome, c.steps, std::move(c)};
    c = std::move(r.config);
  }
  return {false, StepKind::Continued, c.steps, std::move(c)};
}

RunResult run(const MachineSpec& m, std::span<const std::string> input, std::uint64_t fuel,
              OracleResolver* resolver) {
  return run_from(initial_config(m, input), m, fuel, resolver);
}

void MachineRegistry::add(MachineSpec m) {
  std::string name = m.name();
  machines_.insert_or_assign(std::move(name), std::move(m));
}

const MachineSpec& MachineRegistry::get(const std::string& name) const {
  const MachineSpec* m = find(name);
  if (!m) fail(Errc::UnknownMachine, "no machine named '" + name + "'");
  return *m;
}

const MachineSpec* MachineRegistry::find(const std::string& name) const {
  auto it = machines_.find(name);
  return it == machines_.end() ? nullptr : &it->second;
}

std::vector<std::string> MachineRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, m] : machines_) out.push_back(name);
  return out;
}

void StubResolver::set_output(std::string machine, std::vector<std::string> output) {
  outputs_.insert_or_assign(std::move(machine), std::move(output));
}

std::optional<std::vector<std::string>> StubResolver::oracle_output(
    const OracleIf& oracle, const std::vector<std::string>&) {
  auto it = outputs_.find(oracle.oracle_machine);
  if (it == outputs_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::vector<std::string>> RegistryResolver::oracle_output(
    const OracleIf& oracle, const std::vector<std::string>& x) {
  const MachineSpec* f = registry_->find(oracle.oracle_machine);
  if (!f) fail(Errc::UnknownMachine, "oracle references unknown machine '" + oracle.oracle_machine + "'");
  if (depth_ >= max_depth_) return std::nullopt;

  Configuration start;
  try {
    start = initial_config(*f, x);
  } catch (const Error&) {
    // Ill-typed call: x is not a word over f's input alphabet. The truth of
    // the condition is not determined at finite truncation.
    return std::nullopt;
  }
  ++depth_;
  RunResult r = run_from(std::move(start), *f, fuel_, this);
  --depth_;
  if (!r.halted) return std::nullopt;
  return tape_output_tokens(r.final_config.tape2, *f);
}

}  // namespace zenosim
