// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "tempo/bgp.hpp"
#include "tempo/engine.hpp"
#include "tempo/temporal_graph.hpp"

namespace tempo {

/// SplitMix64 (Steele, Lea, Flood 2014); fully specified so generated data
/// is reproducible from other languages.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

 private:
  std::uint64_t state_;
};

struct GenSpec {
  int n_nodes = 50;
  double struct_density = 0.5;
  double temp_density = 0.5;
  int n_snapshots = 25;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Directed complete graph on v1..vn without self-loops, each edge kept with
/// probability struct_density (pairs visited source-major), then each kept
/// edge made active at each snapshot 1..n_snapshots with probability
/// temp_density. Nodes are labelled "node", edges "msg".
TemporalGraph generate(const GenSpec& spec);

/// Maps every timepoint to ceil(rank / factor); structure is unchanged.
TemporalGraph coarsen(const TemporalGraph& g, int factor);

/// Small random instance for differential testing: up to `max_nodes` nodes,
/// `max_edges` edges (self-loops and parallel edges allowed) and
/// `max_times` timepoints drawn from multiples of 0.5.
TemporalGraph random_instance(std::uint64_t seed, int max_nodes = 10, int max_edges = 14,
                              int max_times = 6);

/// "ACCEPT t=2 y1=e5 y2=e6", plus "x=v2" for isolated node variables.
std::string format_accept(const TemporalGraph& g, const Bgp& p, const AcceptedMatching& a);
std::string format_stats(const EngineCounters& c, long long wall_ms);

}  // namespace tempo
