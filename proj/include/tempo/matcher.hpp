// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "tempo/bgp.hpp"
#include "tempo/temporal_graph.hpp"

namespace tempo {

struct MatchOptions {
  /// Forbid two edge variables from binding the same edge (isomorphism on
  /// edges). Off by default: matchings are homomorphisms.
  bool distinct_edges = false;
};

/// Edge-growing hash join over a pattern. Candidate edges for a variable come
/// from the src/dst adjacency index whenever an endpoint is already fixed.
///
/// Partial matchings produced here are edge-induced: a node variable is bound
/// iff it is the endpoint of a bound edge variable.
class PatternJoin {
 public:
  using Emit = std::function<void(const Matching&)>;

  PatternJoin(const TemporalGraph& g, const Bgp& p, MatchOptions opts = {});

  const TemporalGraph& graph() const { return g_; }
  const Bgp& pattern() const { return p_; }

  /// Total matchings using only edges in `edges` (all edges when null).
  void totals(const std::vector<char>* mask, std::span<const EdgeIndex> pool,
              const Emit& emit) const;

  /// Total matchings over old ∪ new that use at least one new edge.
  void delta(const std::vector<char>& old_mask, std::span<const EdgeIndex> old_edges,
             const std::vector<char>& new_mask, std::span<const EdgeIndex> new_edges,
             const Emit& emit) const;

  /// Every edge-induced partial matching within `mask`, the empty one included.
  void partials(const std::vector<char>& mask, std::span<const EdgeIndex> pool,
                const Emit& emit) const;

  /// Strict extensions of `base` that bind additional edge variables to
  /// edges in `mask` only. With an order, `base` must bind an order prefix and
  /// only longer order prefixes are produced.
  void extensions(const Matching& base, const std::vector<char>& mask,
                  std::span<const EdgeIndex> pool, const std::vector<int>* order,
                  const Emit& emit) const;

  /// True iff some unbound edge variable of `m` can be bound within `mask`.
  bool extensible(const Matching& m, const std::vector<char>& mask,
                  std::span<const EdgeIndex> pool) const;

  /// Binds isolated node variables in every label-compatible way.
  void expand_isolated(const Matching& m, const Emit& emit) const;

 private:
  enum class Mode { Exact, Subsets, Chain };
  struct Slot {
    int var;
    const std::vector<char>* mask;
    std::span<const EdgeIndex> pool;
  };
  struct Undo {
    int var;
    int node_a = -1;
    int node_b = -1;
  };

  void run(Matching& m, std::span<const Slot> slots, std::size_t i, Mode mode, bool bound_any,
           const Emit& emit) const;
  bool try_bind(Matching& m, int var, EdgeIndex e, Undo& undo) const;
  static void unbind(Matching& m, const Undo& undo);
  NodeIndex endpoint_node(const Matching& m, const Endpoint& ep) const;
  std::vector<int> join_order(int first, std::vector<int> vars) const;

  const TemporalGraph& g_;
  const Bgp& p_;
  MatchOptions opts_;
  std::vector<NodeIndex> const_node_;
  std::vector<int> isolated_;
  std::vector<EdgeIndex> all_edges_;
};

std::vector<char> edge_mask(const TemporalGraph& g, std::span<const EdgeIndex> edges);

/// All total matchings of `p` in the static graph, sorted by identifiers.
std::vector<Matching> match_total(const TemporalGraph& g, const Bgp& p, MatchOptions opts = {});

/// Total matchings that only use edges from `edges`.
std::vector<Matching> match_within(const TemporalGraph& g, const Bgp& p,
                                   std::span<const EdgeIndex> edges, MatchOptions opts = {});

/// Maximal edge-induced partial matchings in the subgraph formed by `edges`.
std::vector<Matching> match_partial_maximal(const TemporalGraph& g,
                                            std::span<const EdgeIndex> edges, const Bgp& p,
                                            MatchOptions opts = {});

/// match_within(old ∪ new) minus match_within(old). `new_edges` must be
/// disjoint from `old_history`.
std::vector<Matching> delta_match(const TemporalGraph& g, const Bgp& p,
                                  std::span<const EdgeIndex> old_history,
                                  std::span<const EdgeIndex> new_edges, MatchOptions opts = {});

struct Extension {
  Matching from;
  Matching to;
  friend auto operator<=>(const Extension&, const Extension&) = default;
};

/// Pairs (μ, μ′) with μ from `states`, μ ⊆ μ′ and μ′ maximal in `history`
/// (which must already contain `new_edges`). μ′ = μ when μ is maximal.
std::vector<Extension> extend(const TemporalGraph& g, const Bgp& p,
                              std::span<const Matching> states,
                              std::span<const EdgeIndex> new_edges,
                              std::span<const EdgeIndex> history, MatchOptions opts = {});

}  // namespace tempo
