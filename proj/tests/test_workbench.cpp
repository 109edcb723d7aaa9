#include <doctest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"
#include "tempo/matcher.hpp"
#include "tempo/workbench.hpp"

using namespace tempo;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("splitmix64 reference outputs") {
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
  SplitMix64 a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
  SplitMix64 u(7);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK((x >= 0 && x < 1));
  }
}

TEST_CASE("generator") {
  GenSpec full{.n_nodes = 50, .struct_density = 1.0, .temp_density = 1.0, .n_snapshots = 3,
               .seed = 1};
  const auto g = generate(full);
  CHECK(g.num_nodes() == 50);
  CHECK(g.num_edges() == 2450);
  CHECK(g.domain().size() == 3);
  for (EdgeIndex e = 0; e < static_cast<EdgeIndex>(g.num_edges()); ++e) {
    CHECK(g.active(e).size() == 3);
    CHECK(g.edge(e).src != g.edge(e).dst);
  }

  GenSpec half{.n_nodes = 30, .struct_density = 0.5, .temp_density = 0.5, .n_snapshots = 10,
               .seed = 9};
  const auto h = generate(half);
  CHECK(h.num_edges() > 300);
  CHECK(h.num_edges() < 570);

  CHECK_THROWS(generate(GenSpec{.n_nodes = 1}));
  CHECK_THROWS(generate(GenSpec{.struct_density = 0}));
  CHECK_THROWS(generate(GenSpec{.temp_density = 1.5}));
  CHECK_THROWS(generate(GenSpec{.n_snapshots = 0}));
}

TEST_CASE("generated files are byte-identical per seed") {
  GenSpec spec{.n_nodes = 12, .struct_density = 0.4, .temp_density = 0.3, .n_snapshots = 6,
               .seed = 5};
  test::TempDir a, b, c;
  write_graph(generate(spec), a.path());
  write_graph(generate(spec), b.path());
  spec.seed = 6;
  write_graph(generate(spec), c.path());
  for (const auto* f : {"node.csv", "edge.csv", "active.csv"}) {
    CHECK(slurp(a.path() / f) == slurp(b.path() / f));
  }
  CHECK(slurp(a.path() / "active.csv") != slurp(c.path() / "active.csv"));
}

TEST_CASE("coarsening") {
  const auto& g = test::fig1();
  CHECK(coarsen(g, 1).domain().size() == 9);
  const auto one = coarsen(g, 9);
  REQUIRE(one.domain().size() == 1);
  CHECK(one.snapshot(1).size() == 12);
  const auto three = coarsen(g, 3);
  CHECK(std::vector<Timepoint>(three.domain().begin(), three.domain().end()) ==
        std::vector<Timepoint>{1, 2, 3});
  // e1 = {1, 3}: ranks 1 and 5 map to 1 and 2.
  const auto e1 = *three.find_edge("e1");
  CHECK(std::vector<Timepoint>(three.active(e1).begin(), three.active(e1).end()) ==
        std::vector<Timepoint>{1, 2});
  for (const auto* name : {"cycle2", "path3", "leak"}) {
    const auto p = test::pattern(name);
    CHECK(match_total(three, p) == match_total(g, p));
  }
  CHECK_THROWS(coarsen(g, 0));
}

TEST_CASE("result lines") {
  const auto& g = test::fig1();
  const auto p = Bgp::parse("const v6\nnode x\nnode w : ofc\nedge y : v6 -> x\n");
  AcceptedMatching a{match_total(g, p).at(0), 2};
  CHECK(format_accept(g, p, a) == "ACCEPT t=2 y=e7 w=v8");
  EngineCounters c;
  c.rows_processed = 11;
  c.matchings_generated = 2;
  CHECK(format_stats(c, 3) == "STATS rows=11 generated=2 early_rejected=0 wall_ms=3");
}

TEST_CASE("random instances stay within the desk-scale bounds") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto g = random_instance(seed);
    CHECK(g.num_nodes() <= 10);
    CHECK(g.num_edges() <= 14);
    CHECK(g.domain().size() <= 6);
  }
}
