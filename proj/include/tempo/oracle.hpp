// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "tempo/bgp.hpp"
#include "tempo/temporal_graph.hpp"
#include "tempo/timed_automaton.hpp"

/// Brute-force reference implementations. Nothing here calls the matcher or
/// the automaton stepping code.
namespace tempo::oracle {

class GuardError : public Error {
 public:
  using Error::Error;
};

inline constexpr double kMaxAssignments = 1e7;

/// Enumerates every edge assignment (and every node for isolated node
/// variables) and checks the matching conditions literally.
std::vector<Matching> match(const TemporalGraph& g, const Bgp& p, bool distinct_edges = false);

/// All edge-induced partial matchings over `edges`, the empty one included.
std::vector<Matching> partial_matchings(const TemporalGraph& g, std::span<const EdgeIndex> edges,
                                        const Bgp& p, bool distinct_edges = false);

/// Partial matchings over `edges` with no strict extension over `edges`.
std::vector<Matching> maximal_partials(const TemporalGraph& g, std::span<const EdgeIndex> edges,
                                       const Bgp& p, bool distinct_edges = false);

/// Timed word of `m` over the whole domain (unbound variables read 0).
TimedWord word_of(const TemporalGraph& g, const Matching& m);

/// A configuration with explicit clock values (not reset times).
struct Config {
  int state;
  std::vector<double> clocks;
  friend auto operator<=>(const Config&, const Config&) = default;
};

/// Configuration sets after each prefix; entry 0 is the initial set.
std::vector<std::set<Config>> configurations(const TimedAutomaton& ta, const TimedWord& word);

bool accepts(const TimedAutomaton& ta, const TimedWord& word);

/// Accepted total matchings, sorted by identifiers.
std::vector<Matching> evaluate(const TemporalGraph& g, const Bgp& p, const TimedAutomaton& ta,
                               bool distinct_edges = false);

}  // namespace tempo::oracle
