#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "support.hpp"
#include "tempo/matcher.hpp"
#include "tempo/oracle.hpp"
#include "tempo/ordering.hpp"

using namespace tempo;

namespace {

const char* kTwoWide[] = {"ta0_m2", "ta1", "ta2", "ta3", "ta5", "ta6", "ta7", "ta8", "tae",
                          "tae_c7"};

// Dyadic gaps keep explicit clock increments exact.
const double kGaps[] = {1, 0.5, 2.5, 1, 3.25, 0.25, 4, 1, 2};

Matching bind(const TemporalGraph& g, const Bgp& p, std::vector<std::string> edges) {
  Matching m = Matching::empty(p);
  for (std::size_t j = 0; j < edges.size(); ++j) m.edges[j] = *g.find_edge(edges[j]);
  return m;
}

std::set<std::pair<int, std::vector<double>>> as_values(const std::vector<Configuration>& cs,
                                                        Timepoint now) {
  std::set<std::pair<int, std::vector<double>>> out;
  for (const auto& c : cs) {
    std::vector<double> v;
    for (std::size_t k = 0; k < c.clocks.last_reset.size(); ++k) {
      v.push_back(c.clocks.value(static_cast<int>(k), now));
    }
    out.insert({c.state, v});
  }
  return out;
}

std::set<std::pair<int, std::vector<double>>> as_values(const std::set<oracle::Config>& cs) {
  std::set<std::pair<int, std::vector<double>>> out;
  for (const auto& c : cs) out.insert({c.state, c.clocks});
  return out;
}

// Depth-first walk over every word up to `max_len` letters of the given width.
void for_each_word(std::size_t width, std::size_t max_len,
                   const std::function<void(const TimedWord&)>& visit) {
  TimedWord word;
  std::function<void(Timepoint)> rec = [&](Timepoint now) {
    visit(word);
    if (word.size() == max_len) return;
    const Timepoint t = now + kGaps[word.size() % std::size(kGaps)];
    for (Letter l = 0; l < (Letter{1} << width); ++l) {
      word.emplace_back(t, l);
      rec(t);
      word.pop_back();
    }
  };
  rec(0);
}

}  // namespace

TEST_CASE("parsing the relational form of TA2") {
  const auto ta = test::automaton("ta2", 2);
  CHECK(ta.num_states() == 2);
  CHECK(ta.num_clocks() == 1);
  CHECK(ta.initial() == 0);
  CHECK(ta.accepting_states() == std::vector<int>{0, 1});
  REQUIRE(ta.transitions().size() == 4);
  const auto& t = ta.transitions()[1];
  CHECK(t.from == 0);
  CHECK(t.to == 1);
  CHECK(format_guard(t.guard) == "c0<3");
  CHECK(t.resets == std::vector<int>{0});
  CHECK(TimedAutomaton::parse(ta.to_text(), 2).to_text() == ta.to_text());
}

TEST_CASE("automaton parse errors") {
  const std::string head = "states 2\ninitial 0\naccepting 1\nclocks 1\n";
  CHECK_THROWS_AS(TimedAutomaton::parse(head + "trans 0 101 true - 1\n", 2), ParseError);
  CHECK_THROWS_AS(TimedAutomaton::parse(head + "trans 0 10 c1<3 - 1\n", 2), ParseError);
  CHECK_THROWS_AS(TimedAutomaton::parse(head + "trans 0 10 true 2 1\n", 2), ParseError);
  CHECK_THROWS_AS(TimedAutomaton::parse(head + "trans 0 1x true - 1\n", 2), ParseError);
  CHECK_THROWS_AS(TimedAutomaton::parse(head + "trans 0 10 true - 5\n", 2), ParseError);
  CHECK_THROWS_AS(TimedAutomaton::parse("states 1\naccepting 0\n", 2), ParseError);
  CHECK_THROWS_AS(TimedAutomaton::parse("states 1\ninitial 0\n", 2), ParseError);
  CHECK_THROWS_AS(TimedAutomaton::parse(head + "jump 0 1\n", 2), ParseError);
  CHECK_NOTHROW(TimedAutomaton::parse(head + "trans 0 10 c0<=3&c0>=1 0 1\n", 2));
  CHECK_THROWS_AS(test::automaton("ta2", 3), ParseError);
}

TEST_CASE("letter predicates") {
  const auto exact = parse_letter_predicate("10", 2);
  CHECK(exact[0].matches(parse_letter("10")));
  CHECK_FALSE(exact[0].matches(parse_letter("11")));
  const auto wild = parse_letter_predicate("*1", 2);
  CHECK(wild[0].matches(parse_letter("01")));
  CHECK_FALSE(wild[0].matches(parse_letter("10")));
  CHECK(parse_letter_predicate("true", 3)[0].matches(parse_letter("101")));
  CHECK(format_letter(parse_letter("01"), 2) == "01");

  // TA6 reads only letters with at most one active variable.
  const auto ta6 = test::automaton("ta6", 2);
  const auto& theta = ta6.transitions()[0].theta;
  auto sat = [&](const char* l) {
    return std::any_of(theta.begin(), theta.end(),
                       [&](const LetterPattern& p) { return p.matches(parse_letter(l)); });
  };
  CHECK(sat("00"));
  CHECK(sat("01"));
  CHECK_FALSE(sat("11"));
}

TEST_CASE("clock guards") {
  ClockValuation v;
  v.last_reset = {1.0};
  CHECK(parse_guard("c0<3", 1).holds(v, 2));
  CHECK(parse_guard("true", 1).holds(v, 100));
  v.last_reset = {0.0};
  CHECK_FALSE(parse_guard("c0>3", 1).holds(v, 3));
  CHECK(parse_guard("c0>=3", 1).holds(v, 3));
  CHECK(parse_guard("c0<=3", 1).holds(v, 3));
  CHECK_FALSE(parse_guard("c0<3", 1).holds(v, 3));
  CHECK(parse_guard("c0>1&c0<4", 1).holds(v, 2));
  CHECK_FALSE(parse_guard("c0>1&c0<4", 1).holds(v, 5));
}

TEST_CASE("stepping configurations") {
  const auto ta2 = test::automaton("ta2", 2);
  const std::vector<Configuration> start{ta2.initial_configuration()};
  const auto next = ta2.step(start, parse_letter("10"), 1);
  REQUIRE(next.size() == 1);
  CHECK(next[0].state == 1);
  CHECK(next[0].clocks.last_reset[0] == 1);

  const auto ta1 = test::automaton("ta1", 2);
  const std::vector<Configuration> at_s1{{1, {}}};
  CHECK(ta1.step(at_s1, parse_letter("10"), 2).empty());
  CHECK(ta1.step({}, parse_letter("00"), 2).empty());

  // A guard reads the value before the reset of the same transition.
  const auto reset_and_test = TimedAutomaton::parse(
      "states 2\ninitial 0\naccepting 1\nclocks 1\ntrans 0 1 c0>1 0 1\n", 1);
  CHECK(reset_and_test.step(std::vector{reset_and_test.initial_configuration()}, 1, 2).size() == 1);
}

TEST_CASE("acceptance on fig1 words") {
  const auto& g = test::fig1();
  const auto p = test::pattern("cycle2");
  const auto ta1 = test::automaton("ta1", 2);
  CHECK(ta1.accepts(oracle::word_of(g, bind(g, p, {"e5", "e6"}))));
  CHECK_FALSE(ta1.accepts(oracle::word_of(g, bind(g, p, {"e8", "e9"}))));

  const auto office = test::pattern("office");
  const auto w = oracle::word_of(g, bind(g, office, {"e11", "e12"}));
  CHECK_FALSE(test::automaton("ta7", 2).accepts(w));
  CHECK(test::automaton("ta6", 2).accepts(w));

  // TA8: y1 active at 1 and 3 while y2 only at 2 and 4.
  const auto contain = oracle::word_of(g, bind(g, office, {"e11", "e12"}));
  CHECK_FALSE(test::automaton("ta8", 2).accepts(contain));
  CHECK_FALSE(oracle::accepts(test::automaton("ta8", 2), contain));

  CHECK(ta1.accepts({}));
  CHECK_FALSE(test::automaton("ta3", 2).accepts({}));
}

TEST_CASE("acceptance matches the oracle on every short word") {
  for (const auto* name : kTwoWide) {
    const auto ta = test::automaton(name, 2);
    std::size_t accepted = 0;
    for_each_word(2, 7, [&](const TimedWord& w) {
      const bool a = ta.accepts(w);
      accepted += a;
      if (a != oracle::accepts(ta, w)) {
        FAIL_CHECK(name << " disagrees on a word of length " << w.size());
      }
    });
    CAPTURE(name);
    CHECK(accepted > 0);
  }
  for (const auto& [name, width] : {std::pair{"ta4", 3}, {"ta0_m3", 3}, {"ta0_m4", 4}}) {
    const auto ta = test::automaton(name, width);
    for_each_word(width, 4, [&](const TimedWord& w) {
      if (ta.accepts(w) != oracle::accepts(ta, w)) FAIL_CHECK(name << " disagrees");
    });
  }
}

TEST_CASE("lazy clocks equal explicitly incremented clocks") {
  for (const auto* name : {"ta2", "ta7", "tae_c7"}) {
    const auto ta = test::automaton(name, 2);
    for_each_word(2, 6, [&](const TimedWord& w) {
      const auto sets = oracle::configurations(ta, w);
      std::vector<Configuration> cur{ta.initial_configuration()};
      for (std::size_t i = 0; i < w.size(); ++i) {
        cur = ta.step(cur, w[i].second, w[i].first);
        if (as_values(cur, w[i].first) != as_values(sets[i + 1])) {
          FAIL_CHECK(name << " valuations differ after " << i + 1 << " letters");
        }
      }
    });
  }
}

TEST_CASE("step is monotone in the configuration set") {
  const auto ta = test::automaton("ta2", 2);
  std::vector<Configuration> small{{0, {}}};
  small[0].clocks.last_reset = {0.5};
  auto big = small;
  big.push_back({1, {}});
  big.back().clocks.last_reset = {1.0};
  for (Letter l = 0; l < 4; ++l) {
    const auto a = ta.step(small, l, 2);
    const auto b = ta.step(big, l, 2);
    CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
  }
}

TEST_CASE("early accept and early reject sets") {
  CHECK(test::automaton("ta3", 2).early_accept_states() == std::vector<int>{2});
  CHECK(test::automaton("ta3", 2).early_reject_states().empty());
  // Runs of TA1 and TA5 can still die, so no state is safe to accept early.
  CHECK(test::automaton("ta1", 2).early_accept_states().empty());
  CHECK(test::automaton("ta5", 2).early_accept_states().empty());
  CHECK(test::automaton("tae", 2).early_accept_states() == std::vector<int>{2});

  const auto sink = TimedAutomaton::parse(
      "states 3\ninitial 0\naccepting 0 1\nclocks 0\n"
      "trans 0 0 true - 0\ntrans 0 1 true - 1\ntrans 1 * true - 1\n",
      1);
  CHECK(sink.early_reject_states() == std::vector<int>{2});
  CHECK(sink.early_accept_states() == std::vector<int>{0, 1});
}

TEST_CASE("early sets are sound on short continuations") {
  for (const auto* name : kTwoWide) {
    const auto ta = test::automaton(name, 2);
    for_each_word(2, 4, [&](const TimedWord& prefix) {
      std::vector<Configuration> cur{ta.initial_configuration()};
      for (const auto& [t, l] : prefix) cur = ta.step(cur, l, t);
      const bool any_reject =
          std::any_of(cur.begin(), cur.end(), [&](auto& c) { return ta.is_early_reject(c.state); });
      const bool any_accept =
          std::any_of(cur.begin(), cur.end(), [&](auto& c) { return ta.is_early_accept(c.state); });
      if (!any_reject && !any_accept) return;
      const Timepoint t0 = prefix.empty() ? 0 : prefix.back().first;
      for_each_word(2, 3, [&](const TimedWord& suffix) {
        TimedWord full = prefix;
        for (const auto& [t, l] : suffix) full.emplace_back(t0 + t, l);
        // Early reject: runs from rejected configurations never accept.
        std::vector<Configuration> rest;
        for (const auto& c : cur) {
          if (ta.is_early_reject(c.state)) rest.push_back(c);
        }
        for (const auto& [t, l] : suffix) rest = ta.step(rest, l, t0 + t);
        if (ta.any_accepting(rest)) FAIL_CHECK(name << ": early reject unsound");
        if (any_accept && !ta.accepts(full)) FAIL_CHECK(name << ": early accept unsound");
      });
    });
  }
}

TEST_CASE("dead start detection") {
  CHECK(test::automaton("ta2", 2).dead_start());
  CHECK(test::automaton("ta7", 2).dead_start());
  CHECK(test::automaton("tae", 2).dead_start());
  CHECK(test::automaton("ta8", 2).dead_start());
  const auto branching = TimedAutomaton::parse(
      "states 2\ninitial 0\naccepting 1\nclocks 0\ntrans 0 0 true - 0\ntrans 0 0 true - 1\n", 1);
  CHECK_FALSE(branching.dead_start());
  const auto resetting = TimedAutomaton::parse(
      "states 1\ninitial 0\naccepting 0\nclocks 1\ntrans 0 * true 0 0\n", 1);
  CHECK_FALSE(resetting.dead_start());
}

TEST_CASE("unfolding preserves the language") {
  auto ta = test::automaton("ta0_m2", 2);
  auto ta2 = test::automaton("ta2", 2);
  auto big = ta;
  auto big2 = ta2;
  for (int i = 0; i < 3; ++i) {
    big = unfold(big);
    big2 = unfold(big2);
  }
  CHECK(big.num_states() == 16);
  CHECK(big2.num_states() == 16);
  for_each_word(2, 7, [&](const TimedWord& w) {
    if (big.accepts(w) != ta.accepts(w)) FAIL_CHECK("unfolded TA0 differs");
    if (big2.accepts(w) != ta2.accepts(w)) FAIL_CHECK("unfolded TA2 differs");
  });

  const auto clocked = add_reset_clocks(ta2, 3);
  CHECK(clocked.num_clocks() == 4);
  for_each_word(2, 6, [&](const TimedWord& w) {
    if (clocked.accepts(w) != ta2.accepts(w)) FAIL_CHECK("extra clocks change the language");
  });
}

TEST_CASE("widening ignores the new bits") {
  const auto ta = test::automaton("ta1", 2);
  const auto wide = widen(ta, 3);
  CHECK(wide.width() == 3);
  for_each_word(2, 5, [&](const TimedWord& w) {
    TimedWord noisy = w;
    for (auto& [t, l] : noisy) l |= (static_cast<Letter>(t * 4) & 1) << 2;
    if (wide.accepts(noisy) != ta.accepts(w)) FAIL_CHECK("widened automaton differs");
  });
}

TEST_CASE("connected orders") {
  const auto path3 = test::pattern("path3");
  CHECK(is_connected_order(path3, {0, 1, 2}));
  CHECK_FALSE(is_connected_order(path3, {0, 2, 1}));
  CHECK(is_connected_order(path3, {1, 2, 0}));
  CHECK(is_connected_order(Bgp::parse("node a\nedge y : a -> a\n"), {0}));
  // Constants connect edge variables too.
  CHECK(is_connected_order(Bgp::parse("const c\nnode a\nnode b\nedge y : a -> c\nedge z : c -> b\n"),
                           {0, 1}));
  CHECK(parse_order(path3, "y1,y3,y2") == std::vector<int>{0, 2, 1});
  CHECK_THROWS_AS(parse_order(path3, "y1,y2"), ParseError);
  CHECK_THROWS_AS(parse_order(path3, "y1,y2,y9"), ParseError);
}

TEST_CASE("compatible orders") {
  const auto ta3 = test::automaton("ta3", 2);
  CHECK(is_compatible_order(ta3, {0, 1}) == Compatibility::Compatible);
  CHECK(is_compatible_order(ta3, {1, 0}) == Compatibility::Incompatible);
  const auto ta1 = test::automaton("ta1", 2);
  CHECK(is_compatible_order(ta1, {0, 1}) == Compatibility::Compatible);
  CHECK(is_compatible_order(ta1, {1, 0}) == Compatibility::Incompatible);
  CHECK(is_compatible_order(test::automaton("ta4", 3), {0, 1, 2}) == Compatibility::Compatible);
  CHECK(is_compatible_order(test::automaton("ta2", 2), {0, 1}) == Compatibility::Compatible);
  CHECK(is_compatible_order(test::automaton("ta2", 2), {1, 0}) == Compatibility::Unknown);
  CHECK(is_compatible_order(test::automaton("tae_c7", 2), {1, 0}) == Compatibility::Unknown);
  const auto empty = TimedAutomaton::parse("states 1\ninitial 0\naccepting 0\nclocks 0\n", 0);
  CHECK(is_compatible_order(empty, {}) == Compatibility::Compatible);

  const auto cycle2 = test::pattern("cycle2");
  CHECK(search_order(cycle2, ta1) == std::vector<int>{0, 1});
  CHECK_FALSE(search_order(cycle2, test::automaton("ta6", 2)).has_value());
}

TEST_CASE("compatibility agrees with accepted short words") {
  // For clock-free automata, Incompatible must be witnessed by an accepted
  // word in which the later variable shows up strictly first.
  for (const auto* name : {"ta0_m2", "ta1", "ta3", "ta5", "ta6", "ta8", "tae"}) {
    const auto ta = test::automaton(name, 2);
    for (const auto& order : {std::vector<int>{0, 1}, std::vector<int>{1, 0}}) {
      bool witness = false;
      for_each_word(2, 5, [&](const TimedWord& w) {
        if (witness || !ta.accepts(w)) return;
        const Letter early = Letter{1} << order[0];
        const Letter late = Letter{1} << order[1];
        for (const auto& [t, l] : w) {
          if (l & early) return;
          if (l & late) {
            witness = std::any_of(w.begin(), w.end(), [&](auto& x) { return x.second & early; });
            return;
          }
        }
      });
      CAPTURE(name);
      CHECK((is_compatible_order(ta, order) == Compatibility::Incompatible) == witness);
    }
  }
}
