// SPDX-License-Identifier: Apache-2.0
#include "tempo/workbench.hpp"

#include <algorithm>
#include <cmath>

namespace tempo {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void GenSpec::validate() const {
  if (n_nodes < 2) throw std::invalid_argument("need at least 2 nodes");
  if (!(struct_density > 0 && struct_density <= 1)) {
    throw std::invalid_argument("structural density must be in (0, 1]");
  }
  if (!(temp_density > 0 && temp_density <= 1)) {
    throw std::invalid_argument("temporal density must be in (0, 1]");
  }
  if (n_snapshots < 1) throw std::invalid_argument("need at least 1 snapshot");
}

TemporalGraph generate(const GenSpec& spec) {
  spec.validate();
  SplitMix64 rng(spec.seed);
  TemporalGraph::Builder b;
  for (int i = 1; i <= spec.n_nodes; ++i) b.add_node("v" + std::to_string(i), "node");
  std::vector<EdgeIndex> kept;
  for (int s = 1; s <= spec.n_nodes; ++s) {
    for (int d = 1; d <= spec.n_nodes; ++d) {
      if (s == d || !rng.bernoulli(spec.struct_density)) continue;
      kept.push_back(b.add_edge("e" + std::to_string(kept.size() + 1), "v" + std::to_string(s),
                                "v" + std::to_string(d), "msg"));
    }
  }
  for (const auto e : kept) {
    for (int t = 1; t <= spec.n_snapshots; ++t) {
      if (rng.bernoulli(spec.temp_density)) b.add_activation(e, t);
    }
  }
  return std::move(b).build();
}

TemporalGraph coarsen(const TemporalGraph& g, int factor) {
  if (factor < 1) throw std::invalid_argument("coarsening factor must be >= 1");
  TemporalGraph::Builder b;
  for (NodeIndex n = 0; n < static_cast<NodeIndex>(g.num_nodes()); ++n) {
    b.add_node(g.node_id(n), g.node_label(n));
  }
  for (EdgeIndex e = 0; e < static_cast<EdgeIndex>(g.num_edges()); ++e) {
    const auto& edge = g.edge(e);
    b.add_edge(g.edge_id(e), g.node_id(edge.src), g.node_id(edge.dst), edge.label);
  }
  for (EdgeIndex e = 0; e < static_cast<EdgeIndex>(g.num_edges()); ++e) {
    for (const auto t : g.active(e)) {
      const auto rank = *g.rank_of(t);
      b.add_activation(e, static_cast<Timepoint>((rank + factor - 1) / factor));
    }
  }
  return std::move(b).build();
}

TemporalGraph random_instance(std::uint64_t seed, int max_nodes, int max_edges, int max_times) {
  SplitMix64 rng(seed);
  const int n = 2 + static_cast<int>(rng.below(max_nodes - 1));
  const int m = 1 + static_cast<int>(rng.below(max_edges));
  const int k = 1 + static_cast<int>(rng.below(max_times));
  TemporalGraph::Builder b;
  for (int i = 1; i <= n; ++i) b.add_node("v" + std::to_string(i), rng.bernoulli(0.5) ? "a" : "b");
  // Distinct times from {0.5, 1, ..., 6}.
  std::vector<Timepoint> times;
  while (static_cast<int>(times.size()) < k) {
    const Timepoint t = 0.5 * static_cast<double>(1 + rng.below(12));
    if (std::find(times.begin(), times.end(), t) == times.end()) times.push_back(t);
  }
  // Denser activity on some instances, none at all on a few edges.
  const double density = 0.2 + 0.6 * rng.uniform();
  for (int j = 1; j <= m; ++j) {
    const auto s = "v" + std::to_string(1 + rng.below(n));
    const auto d = "v" + std::to_string(1 + rng.below(n));
    const auto e = b.add_edge("e" + std::to_string(j), s, d, rng.bernoulli(0.5) ? "p" : "q");
    for (const auto t : times) {
      if (rng.bernoulli(density)) b.add_activation(e, t);
    }
  }
  return std::move(b).build();
}

std::string format_accept(const TemporalGraph& g, const Bgp& p, const AcceptedMatching& a) {
  std::string s = "ACCEPT t=" + format_time(a.time);
  for (std::size_t j = 0; j < p.width(); ++j) {
    s += ' ' + p.edge_vars()[j].name + '=' + g.edge_id(a.matching.edges[j]);
  }
  for (const int x : p.isolated_node_vars()) {
    s += ' ' + p.node_vars()[x].name + '=' + g.node_id(a.matching.nodes[x]);
  }
  return s;
}

std::string format_stats(const EngineCounters& c, long long wall_ms) {
  return "STATS rows=" + std::to_string(c.rows_processed) +
         " generated=" + std::to_string(c.matchings_generated) +
         " early_rejected=" + std::to_string(c.early_rejected) +
         " wall_ms=" + std::to_string(wall_ms);
}

}  // namespace tempo
