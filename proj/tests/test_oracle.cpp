#include <doctest.h>

#include "support.hpp"
#include "tempo/oracle.hpp"
#include "tempo/workbench.hpp"

using namespace tempo;
using Strings = std::vector<std::string>;

TEST_CASE("oracle matchings") {
  const auto& g = test::fig1();
  const auto p = test::pattern("cycle2");
  CHECK(test::formatted(g, p, oracle::match(g, p)) == Strings{"(e5,e6)", "(e8,e9)"});
  CHECK(oracle::match(g, Bgp::parse("node a : ghost\nnode b\nedge y : a -> b\n")).empty());
}

TEST_CASE("oracle maximal partials") {
  const auto& g = test::fig1();
  const auto p = test::pattern("path2");
  CHECK(test::formatted(g, p, oracle::maximal_partials(g, {}, p)) == Strings{"(-,-)"});

  // Chain a -> b -> c: only the total matching is maximal.
  TemporalGraph::Builder b;
  for (auto n : {"a", "b", "c"}) b.add_node(n, "n");
  b.add_edge("ea", "a", "b", "m");
  b.add_edge("eb", "b", "c", "m");
  const auto chain = std::move(b).build();
  const std::vector<EdgeIndex> both{0, 1};
  CHECK(test::formatted(chain, p, oracle::maximal_partials(chain, both, p)) ==
        Strings{"(-,ea)", "(ea,eb)", "(eb,-)"});
  const std::vector<EdgeIndex> first{0};
  CHECK(test::formatted(chain, p, oracle::maximal_partials(chain, first, p)) ==
        Strings{"(-,ea)", "(ea,-)"});
}

TEST_CASE("oracle acceptance") {
  const auto ta1 = test::automaton("ta1", 2);
  CHECK(oracle::accepts(ta1, {}));
  CHECK_FALSE(oracle::accepts(test::automaton("ta3", 2), {}));
  const TimedWord w{{1, parse_letter("10")}, {2, parse_letter("01")}};
  CHECK(oracle::accepts(ta1, w));
  const auto sets = oracle::configurations(test::automaton("ta2", 2), w);
  REQUIRE(sets.size() == 3);
  REQUIRE(sets[1].size() == 1);
  CHECK(sets[1].begin()->state == 1);
  CHECK(sets[1].begin()->clocks == std::vector<double>{0});
}

TEST_CASE("oracle refuses oversized instances") {
  const auto g = generate(GenSpec{.n_nodes = 30, .struct_density = 1, .temp_density = 0.1,
                                  .n_snapshots = 2, .seed = 1});
  CHECK_THROWS_AS(oracle::match(g, test::pattern("cycle4")), oracle::GuardError);
}
