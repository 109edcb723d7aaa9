// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tempo/common.hpp"

namespace tempo {

class TemporalGraph;

/// An edge-variable endpoint: either a node constant or a node variable.
struct Endpoint {
  bool is_constant = false;
  int index = 0;  // into Bgp::constants() or Bgp::node_vars()

  friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

struct NodeVar {
  std::string name;
  std::optional<std::string> label;
};

struct EdgeVar {
  std::string name;
  Endpoint src;
  Endpoint dst;
  std::optional<std::string> label;
};

/// Basic graph pattern. Edge-variable declaration order is the canonical
/// order: bit j of a letter refers to edge_vars()[j].
///
/// Text format, one declaration per line (`#` starts a comment):
///   const <name>
///   node <name> [: <label>]
///   edge <name> : <endpoint> -> <endpoint> [: <label>]
class Bgp {
 public:
  static Bgp parse(std::string_view text);
  static Bgp load(const std::string& path);

  int add_constant(std::string name);
  int add_node_var(std::string name, std::optional<std::string> label = std::nullopt);
  int add_edge_var(std::string name, std::string_view src, std::string_view dst,
                   std::optional<std::string> label = std::nullopt);

  const std::vector<std::string>& constants() const { return constants_; }
  const std::vector<NodeVar>& node_vars() const { return node_vars_; }
  const std::vector<EdgeVar>& edge_vars() const { return edge_vars_; }

  /// Number of edge variables, i.e. the letter width.
  std::size_t width() const { return edge_vars_.size(); }

  std::optional<int> find_edge_var(std::string_view name) const;

  /// Node variables that are not an endpoint of any edge variable.
  std::vector<int> isolated_node_vars() const;

 private:
  Endpoint resolve(std::string_view name) const;
  void check_fresh(const std::string& name) const;

  std::vector<std::string> constants_;
  std::vector<NodeVar> node_vars_;
  std::vector<EdgeVar> edge_vars_;
};

/// Assignment of pattern variables to graph elements; kUnbound marks an
/// unbound slot. `edges` is indexed by edge variable, `nodes` by node variable.
struct Matching {
  std::vector<EdgeIndex> edges;
  std::vector<NodeIndex> nodes;

  static Matching empty(const Bgp& p) {
    return {std::vector<EdgeIndex>(p.edge_vars().size(), kUnbound),
            std::vector<NodeIndex>(p.node_vars().size(), kUnbound)};
  }

  bool edges_complete() const;
  bool is_total() const;
  /// Bit j set iff edge variable j is bound.
  std::uint64_t bound_mask() const;
  bool contains(const Matching& other) const;

  friend auto operator<=>(const Matching&, const Matching&) = default;
};

struct MatchingHash {
  std::size_t operator()(const Matching& m) const noexcept;
};

/// Orders matchings by bound edge identifiers (edge-variable order), then by
/// node identifiers; unbound slots sort first.
bool less_by_ids(const TemporalGraph& g, const Matching& a, const Matching& b);
void sort_by_ids(const TemporalGraph& g, std::vector<Matching>& ms);

/// "(e5,e6)" / "(e5,-)"; node bindings of isolated variables are appended as
/// "x=v2".
std::string format_matching(const TemporalGraph& g, const Bgp& p, const Matching& m);

}  // namespace tempo
