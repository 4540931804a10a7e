#include "zenosim/format.hpp"

#include <algorithm>
#include <sstream>

namespace zenosim {

namespace {

std::vector<std::string> tokenize(const std::string& line, int line_no) {
  std::string body = line;
  if (auto hash = body.find('#'); hash != std::string::npos) body.erase(hash);
  std::istringstream is(body);
  std::vector<std::string> tokens;
  std::string tok;
  while (is >> tok) {
    for (unsigned char ch : tok)
      if (ch < 33 || ch > 126)
        fail(Errc::SyntaxError, "token '" + tok + "' is not printable ASCII", line_no);
    tokens.push_back(tok);
  }
  return tokens;
}

struct SectionOnce {
  bool seen = false;
  void mark(const std::string& keyword, int line_no) {
    if (seen) fail(Errc::SyntaxError, "duplicate section '" + keyword + "'", line_no);
    seen = true;
  }
};

}  // namespace

ParsedProgram parse_program(const std::string& text) {
  RawMachine raw;
  std::optional<std::vector<std::string>> input;
  SectionOnce states, blank, alphabet, sigma, start, accept, tape1;
  bool header_seen = false, end_seen = false;

  std::istringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    auto tokens = tokenize(line, line_no);
    if (tokens.empty()) continue;
    if (end_seen) fail(Errc::SyntaxError, "content after 'end'", line_no);

    const std::string& head = tokens[0];
    if (!header_seen) {
      if (head != "machine" || tokens.size() != 2)
        fail(Errc::SyntaxError, "expected 'machine <name>'", line_no);
      raw.name = tokens[1];
      header_seen = true;
      continue;
    }

    auto rest = std::vector<std::string>(tokens.begin() + 1, tokens.end());
    if (head == "states:") {
      states.mark(head, line_no);
      if (rest.empty()) fail(Errc::SyntaxError, "states: needs at least one state", line_no);
      raw.states = rest;
    } else if (head == "blank:") {
      blank.mark(head, line_no);
      if (rest.size() != 1) fail(Errc::SyntaxError, "blank: takes exactly one symbol", line_no);
      raw.blank = rest[0];
    } else if (head == "alphabet:") {
      alphabet.mark(head, line_no);
      raw.alphabet = rest;
    } else if (head == "input:") {
      sigma.mark(head, line_no);
      raw.input_alphabet = rest;
    } else if (head == "start:") {
      start.mark(head, line_no);
      if (rest.size() != 1) fail(Errc::SyntaxError, "start: takes exactly one state", line_no);
      raw.start = rest[0];
    } else if (head == "accept:") {
      accept.mark(head, line_no);
      raw.accepting = rest;
    } else if (head == "rule:") {
      if (tokens.size() != 10 || tokens[4] != "->")
        fail(Errc::SyntaxError, "rule: expects '<q> <r1> <r2> -> <q'> <w1> <w2> <M1> <M2>'",
             line_no);
      raw.rules.push_back(RawRule{tokens[1], tokens[2], tokens[3], tokens[5], tokens[6],
                                  tokens[7], tokens[8], tokens[9], line_no});
    } else if (head == "oracle:") {
      if (tokens.size() != 10 || tokens[2] != "if" || tokens[6] != "then" || tokens[8] != "else")
        fail(Errc::SyntaxError,
             "oracle: expects '<q> if <rel> <machine> <k> then <qT> else <qF>'", line_no);
      raw.oracles.push_back(
          RawOracle{tokens[1], tokens[3], tokens[4], tokens[5], tokens[7], tokens[9], line_no});
    } else if (head == "tape1:") {
      tape1.mark(head, line_no);
      input = rest;
    } else if (head == "end") {
      if (tokens.size() != 1) fail(Errc::SyntaxError, "'end' stands alone", line_no);
      end_seen = true;
    } else {
      fail(Errc::SyntaxError, "unknown directive '" + head + "'", line_no);
    }
  }

  if (!header_seen) fail(Errc::SyntaxError, "empty document: missing 'machine <name>'", line_no);
  if (!end_seen) fail(Errc::SyntaxError, "missing 'end'", line_no);

  return ParsedProgram{validate_spec(raw), std::move(input)};
}

namespace {

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

}  // namespace

std::string serialize_program(const MachineSpec& m,
                              const std::optional<std::vector<std::string>>& input) {
  std::string out;
  out += "machine " + m.name() + "\n";
  out += "states: " + join(m.state_names()) + "\n";
  out += "blank: " + m.symbol_name(m.blank()) + "\n";
  out += "alphabet: " + join(m.symbol_names()) + "\n";
  if (!m.input_alphabet().empty())
    out += "input: " + join(m.tokens_of(m.input_alphabet())) + "\n";
  out += "start: " + m.state_name(m.start()) + "\n";
  std::vector<std::string> accept_tokens;
  for (StateId q : m.accepting_states()) accept_tokens.push_back(m.state_name(q));
  out += "accept:" + (accept_tokens.empty() ? "" : " " + join(accept_tokens)) + "\n";

  std::vector<std::string> rule_lines;
  for (const auto& [lhs, rhs] : m.rules()) {
    std::string line = "rule: " + m.state_name(lhs.state) + " " + m.symbol_name(lhs.read1) +
                       " " + m.symbol_name(lhs.read2) + " -> " + m.state_name(rhs.next) + " " +
                       m.symbol_name(rhs.write1) + " " + m.symbol_name(rhs.write2) + " " +
                       std::string(1, static_cast<char>(rhs.move1)) + " " +
                       std::string(1, static_cast<char>(rhs.move2));
    rule_lines.push_back(std::move(line));
  }
  std::sort(rule_lines.begin(), rule_lines.end());
  for (const auto& l : rule_lines) out += l + "\n";

  std::vector<std::string> oracle_lines;
  for (const OracleIf& o : m.oracles()) {
    std::string k;
    for (SymbolId s : o.threshold) k += m.symbol_name(s);
    oracle_lines.push_back("oracle: " + m.state_name(o.at_state) + " if " +
                           relation_token(o.relation) + " " + o.oracle_machine + " " + k +
                           " then " + m.state_name(o.true_state) + " else " +
                           m.state_name(o.false_state));
  }
  std::sort(oracle_lines.begin(), oracle_lines.end());
  for (const auto& l : oracle_lines) out += l + "\n";

  if (input) out += "tape1:" + (input->empty() ? "" : " " + join(*input)) + "\n";
  out += "end\n";
  return out;
}

EncodedMachine encode_for_universal(const MachineSpec& m,
                                    const std::optional<std::vector<std::string>>& input) {
  std::string text = serialize_program(m, input);
  EncodedMachine e;
  e.symbols.reserve(text.size() * 8);
  for (unsigned char ch : text) {
    for (int bit = 6; bit >= 0; --bit) e.symbols += ((ch >> bit) & 1) ? '1' : '0';
    e.symbols += '#';
  }
  return e;
}

ParsedProgram decode_universal(const EncodedMachine& e) {
  if (e.symbols.size() % 8 != 0)
    fail(Errc::DecodeError, "encoded length is not a multiple of 8 symbols");
  std::string text;
  text.reserve(e.symbols.size() / 8);
  for (std::size_t i = 0; i < e.symbols.size(); i += 8) {
    unsigned ch = 0;
    for (std::size_t b = 0; b < 7; ++b) {
      char sym = e.symbols[i + b];
      if (sym != '0' && sym != '1')
        fail(Errc::DecodeError, "expected a binary digit at symbol " + std::to_string(i + b));
      ch = (ch << 1) | static_cast<unsigned>(sym == '1');
    }
    if (e.symbols[i + 7] != '#')
      fail(Errc::DecodeError, "missing record terminator at symbol " + std::to_string(i + 7));
    text += static_cast<char>(ch);
  }
  try {
    return parse_program(text);
  } catch (const Error& err) {
    fail(Errc::DecodeError, std::string("decoded text is not a valid program: ") + err.what());
  }
}

}  // namespace zenosim
