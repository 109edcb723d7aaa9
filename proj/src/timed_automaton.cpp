// SPDX-License-Identifier: Apache-2.0
#include "tempo/timed_automaton.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace tempo {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::vector<std::string_view> split_on(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

int parse_int(std::string_view s, const char* what) {
  int v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size() || v < 0) {
    throw ParseError(std::string("invalid ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

// True iff every letter of the given width matches one of the patterns.
bool covers(std::vector<LetterPattern> patterns, std::size_t width, std::size_t bit) {
  if (patterns.empty()) return false;
  for (; bit < width; ++bit) {
    const Letter m = Letter{1} << bit;
    if (std::any_of(patterns.begin(), patterns.end(),
                    [&](const LetterPattern& p) { return p.care & m; })) {
      break;
    }
  }
  if (bit >= width) return true;
  const Letter m = Letter{1} << bit;
  for (const Letter v : {Letter{0}, m}) {
    std::vector<LetterPattern> sub;
    for (const auto& p : patterns) {
      if (!(p.care & m) || (p.value & m) == v) sub.push_back({p.care & ~m, p.value & ~m});
    }
    if (!covers(std::move(sub), width, bit + 1)) return false;
  }
  return true;
}

const char* op_text(Comparator op) {
  switch (op) {
    case Comparator::Less: return "<";
    case Comparator::LessEq: return "<=";
    case Comparator::Greater: return ">";
    case Comparator::GreaterEq: return ">=";
  }
  return "?";
}

}  // namespace

bool LetterPattern::concrete(std::size_t width) const {
  const Letter all = width >= 64 ? ~Letter{0} : (Letter{1} << width) - 1;
  return care == all;
}

std::vector<LetterPattern> parse_letter_predicate(std::string_view text, std::size_t width) {
  if (text == "true") return {LetterPattern{}};
  std::vector<LetterPattern> out;
  for (const auto part : split_on(text, '|')) {
    if (part.size() != width) {
      throw ParseError("pattern '" + std::string(part) + "' has width " +
                       std::to_string(part.size()) + ", expected " + std::to_string(width));
    }
    LetterPattern p;
    for (std::size_t j = 0; j < part.size(); ++j) {
      const Letter bit = Letter{1} << j;
      switch (part[j]) {
        case '0': p.care |= bit; break;
        case '1': p.care |= bit; p.value |= bit; break;
        case '*': break;
        default: throw ParseError("bad pattern character in '" + std::string(part) + "'");
      }
    }
    out.push_back(p);
  }
  return out;
}

std::string format_pattern(const LetterPattern& p, std::size_t width) {
  std::string s(width, '*');
  for (std::size_t j = 0; j < width; ++j) {
    const Letter bit = Letter{1} << j;
    if (p.care & bit) s[j] = (p.value & bit) ? '1' : '0';
  }
  return s;
}

std::string format_letter(Letter l, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t j = 0; j < width; ++j) {
    if (l & (Letter{1} << j)) s[j] = '1';
  }
  return s;
}

Letter parse_letter(std::string_view text) {
  Letter l = 0;
  for (std::size_t j = 0; j < text.size(); ++j) {
    if (text[j] == '1') {
      l |= Letter{1} << j;
    } else if (text[j] != '0') {
      throw ParseError("bad letter '" + std::string(text) + "'");
    }
  }
  return l;
}

bool ClockConstraint::holds(double value) const {
  switch (op) {
    case Comparator::Less: return value < bound;
    case Comparator::LessEq: return value <= bound;
    case Comparator::Greater: return value > bound;
    case Comparator::GreaterEq: return value >= bound;
  }
  return false;
}

bool ClockGuard::holds(const ClockValuation& v, Timepoint now) const {
  return std::all_of(conjuncts.begin(), conjuncts.end(), [&](const ClockConstraint& c) {
    return c.holds(v.value(c.clock, now));
  });
}

ClockGuard parse_guard(std::string_view text, int n_clocks) {
  ClockGuard g;
  if (text == "true") return g;
  for (const auto atom : split_on(text, '&')) {
    if (atom.size() < 3 || atom[0] != 'c') throw ParseError("bad guard '" + std::string(text) + "'");
    const auto op_pos = atom.find_first_of("<>");
    if (op_pos == std::string_view::npos) throw ParseError("bad guard '" + std::string(text) + "'");
    ClockConstraint c;
    c.clock = parse_int(atom.substr(1, op_pos - 1), "clock index");
    if (c.clock >= n_clocks) {
      throw ParseError("unknown clock c" + std::to_string(c.clock));
    }
    const bool eq = op_pos + 1 < atom.size() && atom[op_pos + 1] == '=';
    if (atom[op_pos] == '<') {
      c.op = eq ? Comparator::LessEq : Comparator::Less;
    } else {
      c.op = eq ? Comparator::GreaterEq : Comparator::Greater;
    }
    c.bound = parse_time(atom.substr(op_pos + (eq ? 2 : 1)));
    if (c.bound < 0) throw ParseError("negative guard bound in '" + std::string(text) + "'");
    g.conjuncts.push_back(c);
  }
  return g;
}

std::string format_guard(const ClockGuard& g) {
  if (g.is_true()) return "true";
  std::string s;
  for (const auto& c : g.conjuncts) {
    if (!s.empty()) s += '&';
    s += 'c' + std::to_string(c.clock) + op_text(c.op) + format_time(c.bound);
  }
  return s;
}

TimedAutomaton TimedAutomaton::parse(std::string_view text, std::size_t width) {
  if (width > 64) throw ParseError("letters wider than 64 bits are not supported");
  int n_states = -1;
  int initial = -1;
  int n_clocks = 0;
  std::vector<int> accepting;
  bool have_accepting = false;
  std::vector<Transition> transitions;

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    const auto where = "line " + std::to_string(line_no) + ": ";
    try {
      if (tok[0] == "states" && tok.size() == 2) {
        n_states = parse_int(tok[1], "state count");
      } else if (tok[0] == "initial" && tok.size() == 2) {
        initial = parse_int(tok[1], "state");
      } else if (tok[0] == "accepting") {
        have_accepting = true;
        for (std::size_t i = 1; i < tok.size(); ++i) accepting.push_back(parse_int(tok[i], "state"));
      } else if (tok[0] == "clocks" && tok.size() == 2) {
        n_clocks = parse_int(tok[1], "clock count");
      } else if (tok[0] == "trans" && tok.size() == 6) {
        Transition t;
        t.from = parse_int(tok[1], "state");
        t.theta = parse_letter_predicate(tok[2], width);
        t.guard = parse_guard(tok[3], n_clocks);
        if (tok[4] != "-") {
          for (const auto r : split_on(tok[4], ',')) {
            const int c = parse_int(r, "clock index");
            if (c >= n_clocks) throw ParseError("unknown clock " + std::string(r));
            t.resets.push_back(c);
          }
        }
        t.to = parse_int(tok[5], "state");
        transitions.push_back(std::move(t));
      } else {
        throw ParseError("unrecognised declaration '" + std::string(tok[0]) + "'");
      }
    } catch (const ParseError& e) {
      throw ParseError(where + e.what());
    }
  }
  if (n_states < 0) throw ParseError("missing 'states' declaration");
  if (initial < 0) throw ParseError("missing 'initial' declaration");
  if (!have_accepting) throw ParseError("missing 'accepting' declaration");
  return TimedAutomaton(n_states, initial, std::move(accepting), n_clocks, width,
                        std::move(transitions));
}

TimedAutomaton TimedAutomaton::load(const std::filesystem::path& path, std::size_t width) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str(), width);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

TimedAutomaton::TimedAutomaton(int n_states, int initial, std::vector<int> accepting,
                               int n_clocks, std::size_t width,
                               std::vector<Transition> transitions)
    : n_states_(n_states),
      initial_(initial),
      accepting_(static_cast<std::size_t>(std::max(n_states, 0)), 0),
      n_clocks_(n_clocks),
      width_(width),
      transitions_(std::move(transitions)) {
  if (n_states <= 0) throw ParseError("an automaton needs at least one state");
  auto check_state = [&](int s) {
    if (s < 0 || s >= n_states) throw ParseError("state " + std::to_string(s) + " out of range");
  };
  check_state(initial);
  for (const int s : accepting) {
    check_state(s);
    accepting_[s] = 1;
  }
  for (const auto& t : transitions_) {
    check_state(t.from);
    check_state(t.to);
    for (const auto& c : t.guard.conjuncts) {
      if (c.clock < 0 || c.clock >= n_clocks) throw ParseError("guard uses an unknown clock");
    }
    for (const int c : t.resets) {
      if (c < 0 || c >= n_clocks) throw ParseError("reset of an unknown clock");
    }
  }
  index();
  classify();
}

void TimedAutomaton::index() {
  concrete_.assign(n_states_, {});
  wildcard_.assign(n_states_, {});
  for (int i = 0; i < static_cast<int>(transitions_.size()); ++i) {
    const auto& t = transitions_[i];
    const bool all_concrete = std::all_of(t.theta.begin(), t.theta.end(),
                                          [&](const LetterPattern& p) { return p.concrete(width_); });
    if (!all_concrete) {
      wildcard_[t.from].push_back(i);
      continue;
    }
    for (const auto& p : t.theta) {
      auto& bucket = concrete_[t.from][p.value];
      if (bucket.empty() || bucket.back() != i) bucket.push_back(i);
    }
  }
}

void TimedAutomaton::classify() {
  // Reachability with guards ignored; every listed pattern is satisfiable.
  std::vector<std::vector<int>> succ(n_states_);
  std::vector<std::vector<LetterPattern>> unguarded(n_states_);
  for (const auto& t : transitions_) {
    if (t.theta.empty()) continue;
    succ[t.from].push_back(t.to);
    if (t.guard.is_true()) {
      unguarded[t.from].insert(unguarded[t.from].end(), t.theta.begin(), t.theta.end());
    }
  }
  std::vector<char> complete(n_states_);
  for (int s = 0; s < n_states_; ++s) complete[s] = covers(unguarded[s], width_, 0);

  early_accept_.assign(n_states_, 0);
  early_reject_.assign(n_states_, 0);
  for (int s = 0; s < n_states_; ++s) {
    std::vector<char> seen(n_states_, 0);
    std::vector<int> stack{s};
    seen[s] = 1;
    bool reaches_accepting = false;
    bool all_safe = true;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      reaches_accepting = reaches_accepting || accepting_[u];
      all_safe = all_safe && accepting_[u] && complete[u];
      for (const int v : succ[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    early_reject_[s] = !reaches_accepting;
    early_accept_[s] = all_safe;
  }

  bool loop = false;
  bool other = false;
  for (const auto& t : transitions_) {
    if (t.from != initial_) continue;
    const bool reads_empty = std::any_of(t.theta.begin(), t.theta.end(),
                                         [](const LetterPattern& p) { return p.matches(0); });
    if (!reads_empty) continue;
    if (t.to == initial_ && t.guard.is_true() && t.resets.empty() && !loop) {
      loop = true;
    } else {
      other = true;
    }
  }
  dead_start_ = loop && !other;
}

std::vector<int> TimedAutomaton::accepting_states() const {
  std::vector<int> out;
  for (int s = 0; s < n_states_; ++s) {
    if (accepting_[s]) out.push_back(s);
  }
  return out;
}

std::vector<int> TimedAutomaton::early_accept_states() const {
  std::vector<int> out;
  for (int s = 0; s < n_states_; ++s) {
    if (early_accept_[s]) out.push_back(s);
  }
  return out;
}

std::vector<int> TimedAutomaton::early_reject_states() const {
  std::vector<int> out;
  for (int s = 0; s < n_states_; ++s) {
    if (early_reject_[s]) out.push_back(s);
  }
  return out;
}

Configuration TimedAutomaton::initial_configuration() const {
  Configuration c;
  c.state = initial_;
  c.clocks.last_reset.assign(static_cast<std::size_t>(n_clocks_), 0.0);
  return c;
}

void TimedAutomaton::step(std::span<const Configuration> configs, Letter letter, Timepoint now,
                          std::vector<Configuration>& out) const {
  out.clear();
  for (const auto& cfg : configs) {
    auto fire = [&](const Transition& t) {
      if (!t.guard.holds(cfg.clocks, now)) return;
      Configuration next{t.to, cfg.clocks};
      for (const int c : t.resets) next.clocks.last_reset[c] = now;
      out.push_back(std::move(next));
    };
    const auto& table = concrete_[cfg.state];
    if (const auto it = table.find(letter); it != table.end()) {
      for (const int i : it->second) fire(transitions_[i]);
    }
    for (const int i : wildcard_[cfg.state]) {
      const auto& t = transitions_[i];
      if (std::any_of(t.theta.begin(), t.theta.end(),
                      [&](const LetterPattern& p) { return p.matches(letter); })) {
        fire(t);
      }
    }
  }
  if (out.size() > 1) {
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
}

std::vector<Configuration> TimedAutomaton::step(std::span<const Configuration> configs,
                                                Letter letter, Timepoint now) const {
  std::vector<Configuration> out;
  step(configs, letter, now, out);
  return out;
}

bool TimedAutomaton::any_accepting(std::span<const Configuration> configs) const {
  return std::any_of(configs.begin(), configs.end(),
                     [&](const Configuration& c) { return accepting_[c.state]; });
}

bool TimedAutomaton::accepts(const TimedWord& word) const {
  std::vector<Configuration> cur{initial_configuration()};
  std::vector<Configuration> next;
  for (const auto& [t, letter] : word) {
    step(cur, letter, t, next);
    cur.swap(next);
    if (cur.empty()) return false;
  }
  return any_accepting(cur);
}

std::string TimedAutomaton::to_text() const {
  std::ostringstream out;
  out << "states " << n_states_ << "\ninitial " << initial_ << "\naccepting";
  for (const int s : accepting_states()) out << ' ' << s;
  out << "\nclocks " << n_clocks_ << '\n';
  for (const auto& t : transitions_) {
    std::string theta;
    for (const auto& p : t.theta) {
      if (!theta.empty()) theta += '|';
      theta += format_pattern(p, width_);
    }
    std::string resets;
    for (const int c : t.resets) {
      if (!resets.empty()) resets += ',';
      resets += std::to_string(c);
    }
    out << "trans " << t.from << ' ' << theta << ' ' << format_guard(t.guard) << ' '
        << (resets.empty() ? "-" : resets) << ' ' << t.to << '\n';
  }
  return out.str();
}

TimedAutomaton widen(const TimedAutomaton& ta, std::size_t width) {
  if (width < ta.width()) throw std::invalid_argument("cannot narrow an automaton");
  return TimedAutomaton(ta.num_states(), ta.initial(), ta.accepting_states(), ta.num_clocks(),
                        width, ta.transitions());
}

TimedAutomaton unfold(const TimedAutomaton& ta) {
  const int n = ta.num_states();
  std::vector<int> accepting;
  for (const int s : ta.accepting_states()) {
    accepting.push_back(s);
    accepting.push_back(s + n);
  }
  std::vector<Transition> transitions;
  for (const auto& t : ta.transitions()) {
    const int flip = t.to < t.from ? n : 0;
    for (const int copy : {0, n}) {
      Transition u = t;
      u.from = t.from + copy;
      u.to = t.to + (copy ^ flip);
      transitions.push_back(std::move(u));
    }
  }
  return TimedAutomaton(2 * n, ta.initial(), std::move(accepting), ta.num_clocks(), ta.width(),
                        std::move(transitions));
}

TimedAutomaton add_reset_clocks(const TimedAutomaton& ta, int k) {
  std::vector<Transition> transitions = ta.transitions();
  for (auto& t : transitions) {
    for (int c = 0; c < k; ++c) t.resets.push_back(ta.num_clocks() + c);
  }
  return TimedAutomaton(ta.num_states(), ta.initial(), ta.accepting_states(),
                        ta.num_clocks() + k, ta.width(), std::move(transitions));
}

}  // namespace tempo
