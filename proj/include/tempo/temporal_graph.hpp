// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tempo/common.hpp"

namespace tempo {

struct Edge {
  NodeIndex src;
  NodeIndex dst;
  std::string label;
};

/// Static labelled multigraph plus, per edge, the sorted set of timepoints at
/// which it is active. Immutable once built; node and edge identifiers are
/// mapped to dense indices in insertion order.
class TemporalGraph {
 public:
  class Builder {
   public:
    NodeIndex add_node(std::string id, std::string label);
    EdgeIndex add_edge(std::string id, std::string_view src, std::string_view dst,
                       std::string label);
    void add_activation(std::string_view edge_id, Timepoint t);
    void add_activation(EdgeIndex e, Timepoint t);
    TemporalGraph build() &&;

   private:
    std::vector<std::string> node_ids_;
    std::vector<std::string> node_labels_;
    std::unordered_map<std::string, NodeIndex> node_index_;
    std::vector<std::string> edge_ids_;
    std::vector<Edge> edges_;
    std::unordered_map<std::string, EdgeIndex> edge_index_;
    std::vector<std::vector<Timepoint>> active_;
  };

  TemporalGraph() = default;

  /// Reads `node.csv`, `edge.csv` and `active.csv` from a directory.
  static TemporalGraph load(const std::filesystem::path& dir);
  static TemporalGraph load(const std::filesystem::path& node_path,
                            const std::filesystem::path& edge_path,
                            const std::filesystem::path& active_path);

  std::size_t num_nodes() const { return node_ids_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const std::string& node_id(NodeIndex n) const { return node_ids_[n]; }
  const std::string& node_label(NodeIndex n) const { return node_labels_[n]; }
  std::optional<NodeIndex> find_node(std::string_view id) const;

  const Edge& edge(EdgeIndex e) const { return edges_[e]; }
  const std::string& edge_id(EdgeIndex e) const { return edge_ids_[e]; }
  std::optional<EdgeIndex> find_edge(std::string_view id) const;

  std::span<const EdgeIndex> out_edges(NodeIndex n) const { return out_[n]; }
  std::span<const EdgeIndex> in_edges(NodeIndex n) const { return in_[n]; }

  /// Sorted, duplicate-free activation times of an edge (possibly empty).
  std::span<const Timepoint> active(EdgeIndex e) const { return active_[e]; }
  bool is_active(EdgeIndex e, Timepoint t) const;

  /// The temporal domain: every distinct activation time, increasing.
  std::span<const Timepoint> domain() const { return domain_; }

  /// 1-based rank of `t` in the domain, if present.
  std::optional<std::size_t> rank_of(Timepoint t) const;

  /// Rank (1-based) of the first activation of `e`; 0 when never active.
  std::size_t first_seen_rank(EdgeIndex e) const { return first_seen_rank_[e]; }
  std::optional<Timepoint> first_seen(EdgeIndex e) const;

  /// Edges active at `t`, ascending. Empty when `t` is not in the domain.
  std::span<const EdgeIndex> snapshot(Timepoint t) const;
  /// Edges active at the domain point of the given 1-based rank.
  std::span<const EdgeIndex> snapshot_at_rank(std::size_t rank) const {
    return snapshots_[rank - 1];
  }

  /// Union of snapshots with rank <= `rank`; rank 0 is the empty history.
  /// Throws std::out_of_range when rank > |domain|.
  std::vector<EdgeIndex> history_upto(std::size_t rank) const;

 private:
  std::vector<std::string> node_ids_;
  std::vector<std::string> node_labels_;
  std::unordered_map<std::string, NodeIndex> node_index_;
  std::vector<std::string> edge_ids_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, EdgeIndex> edge_index_;
  std::vector<std::vector<Timepoint>> active_;
  std::vector<std::vector<EdgeIndex>> out_;
  std::vector<std::vector<EdgeIndex>> in_;
  std::vector<Timepoint> domain_;
  std::vector<std::size_t> first_seen_rank_;
  std::vector<std::vector<EdgeIndex>> snapshots_;
};

/// Writes the three CSV files of `g` into `dir` (created if missing).
void write_graph(const TemporalGraph& g, const std::filesystem::path& dir);

}  // namespace tempo
