// SPDX-License-Identifier: Apache-2.0
#include "tempo/matcher.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace tempo {

std::vector<char> edge_mask(const TemporalGraph& g, std::span<const EdgeIndex> edges) {
  std::vector<char> mask(g.num_edges(), 0);
  for (const auto e : edges) mask[e] = 1;
  return mask;
}

PatternJoin::PatternJoin(const TemporalGraph& g, const Bgp& p, MatchOptions opts)
    : g_(g), p_(p), opts_(opts), isolated_(p.isolated_node_vars()) {
  const_node_.reserve(p.constants().size());
  for (const auto& c : p.constants()) const_node_.push_back(g.find_node(c).value_or(kUnbound));
  all_edges_.resize(g.num_edges());
  std::iota(all_edges_.begin(), all_edges_.end(), EdgeIndex{0});
}

NodeIndex PatternJoin::endpoint_node(const Matching& m, const Endpoint& ep) const {
  return ep.is_constant ? const_node_[ep.index] : m.nodes[ep.index];
}

bool PatternJoin::try_bind(Matching& m, int var, EdgeIndex e, Undo& undo) const {
  const auto& y = p_.edge_vars()[var];
  const auto& edge = g_.edge(e);
  if (y.label && edge.label != *y.label) return false;
  if (opts_.distinct_edges && std::find(m.edges.begin(), m.edges.end(), e) != m.edges.end()) {
    return false;
  }
  undo = Undo{var};
  auto fix = [&](const Endpoint& ep, NodeIndex n, int& undo_slot) {
    if (ep.is_constant) return const_node_[ep.index] == n;
    auto& slot = m.nodes[ep.index];
    if (slot != kUnbound) return slot == n;
    const auto& label = p_.node_vars()[ep.index].label;
    if (label && g_.node_label(n) != *label) return false;
    slot = n;
    undo_slot = ep.index;
    return true;
  };
  if (!fix(y.src, edge.src, undo.node_a) || !fix(y.dst, edge.dst, undo.node_b)) {
    unbind(m, undo);
    return false;
  }
  m.edges[var] = e;
  return true;
}

void PatternJoin::unbind(Matching& m, const Undo& undo) {
  m.edges[undo.var] = kUnbound;
  if (undo.node_a >= 0) m.nodes[undo.node_a] = kUnbound;
  if (undo.node_b >= 0) m.nodes[undo.node_b] = kUnbound;
}

void PatternJoin::run(Matching& m, std::span<const Slot> slots, std::size_t i, Mode mode,
                      bool bound_any, const Emit& emit) const {
  if (i == slots.size()) {
    if (mode != Mode::Chain && (mode != Mode::Subsets || bound_any)) emit(m);
    return;
  }
  if (mode == Mode::Subsets) run(m, slots, i + 1, mode, bound_any, emit);

  const auto& slot = slots[i];
  const auto& y = p_.edge_vars()[slot.var];
  std::span<const EdgeIndex> candidates = slot.pool;
  const NodeIndex src = endpoint_node(m, y.src);
  const NodeIndex dst = endpoint_node(m, y.dst);
  const bool src_fixed = y.src.is_constant || src != kUnbound;
  const bool dst_fixed = y.dst.is_constant || dst != kUnbound;
  if (src_fixed) {
    if (src == kUnbound) return;  // constant missing from the graph
    candidates = g_.out_edges(src);
  } else if (dst_fixed) {
    if (dst == kUnbound) return;
    candidates = g_.in_edges(dst);
  }
  for (const auto e : candidates) {
    if (slot.mask != nullptr && !(*slot.mask)[e]) continue;
    Undo undo;
    if (!try_bind(m, slot.var, e, undo)) continue;
    if (mode == Mode::Chain) emit(m);
    run(m, slots, i + 1, mode, true, emit);
    unbind(m, undo);
  }
}

std::vector<int> PatternJoin::join_order(int first, std::vector<int> vars) const {
  // Greedy connected order: next is the lowest variable sharing an endpoint
  // with something already placed, else the lowest remaining one.
  std::vector<int> order;
  std::vector<Endpoint> touched;
  auto add = [&](int v) {
    order.push_back(v);
    touched.push_back(p_.edge_vars()[v].src);
    touched.push_back(p_.edge_vars()[v].dst);
    vars.erase(std::find(vars.begin(), vars.end(), v));
  };
  if (first >= 0) add(first);
  while (!vars.empty()) {
    int pick = vars.front();
    for (const int v : vars) {
      const auto& y = p_.edge_vars()[v];
      const bool joined =
          y.src.is_constant || y.dst.is_constant ||
          std::find(touched.begin(), touched.end(), y.src) != touched.end() ||
          std::find(touched.begin(), touched.end(), y.dst) != touched.end();
      if (joined) {
        pick = v;
        break;
      }
    }
    add(pick);
  }
  return order;
}

void PatternJoin::expand_isolated(const Matching& m, const Emit& emit) const {
  if (isolated_.empty()) {
    emit(m);
    return;
  }
  Matching work = m;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == isolated_.size()) {
      emit(work);
      return;
    }
    const int x = isolated_[i];
    const auto& label = p_.node_vars()[x].label;
    for (NodeIndex n = 0; n < static_cast<NodeIndex>(g_.num_nodes()); ++n) {
      if (label && g_.node_label(n) != *label) continue;
      work.nodes[x] = n;
      rec(i + 1);
    }
    work.nodes[x] = kUnbound;
  };
  rec(0);
}

void PatternJoin::totals(const std::vector<char>* mask, std::span<const EdgeIndex> pool,
                         const Emit& emit) const {
  std::vector<int> vars(p_.width());
  std::iota(vars.begin(), vars.end(), 0);
  std::vector<Slot> slots;
  for (const int v : join_order(-1, vars)) slots.push_back({v, mask, pool});
  Matching m = Matching::empty(p_);
  run(m, slots, 0, Mode::Exact, false, [&](const Matching& t) { expand_isolated(t, emit); });
}

void PatternJoin::delta(const std::vector<char>& old_mask, std::span<const EdgeIndex> old_edges,
                        const std::vector<char>& new_mask, std::span<const EdgeIndex> new_edges,
                        const Emit& emit) const {
  if (new_edges.empty()) return;
  std::vector<char> union_mask(old_mask);
  for (const auto e : new_edges) union_mask[e] = 1;
  std::vector<EdgeIndex> union_edges(old_edges.begin(), old_edges.end());
  union_edges.insert(union_edges.end(), new_edges.begin(), new_edges.end());

  std::vector<int> vars(p_.width());
  std::iota(vars.begin(), vars.end(), 0);
  // Variable j is the first (lowest) one bound to a new edge: lower variables
  // use old edges only, higher ones anything.
  for (int j = 0; j < static_cast<int>(p_.width()); ++j) {
    std::vector<Slot> slots;
    for (const int v : join_order(j, vars)) {
      if (v < j) {
        slots.push_back({v, &old_mask, old_edges});
      } else if (v == j) {
        slots.push_back({v, &new_mask, new_edges});
      } else {
        slots.push_back({v, &union_mask, union_edges});
      }
    }
    Matching m = Matching::empty(p_);
    run(m, slots, 0, Mode::Exact, false, [&](const Matching& t) { expand_isolated(t, emit); });
  }
}

void PatternJoin::partials(const std::vector<char>& mask, std::span<const EdgeIndex> pool,
                           const Emit& emit) const {
  std::vector<int> vars(p_.width());
  std::iota(vars.begin(), vars.end(), 0);
  std::vector<Slot> slots;
  for (const int v : vars) slots.push_back({v, &mask, pool});
  Matching m = Matching::empty(p_);
  emit(m);
  run(m, slots, 0, Mode::Subsets, false, emit);
}

void PatternJoin::extensions(const Matching& base, const std::vector<char>& mask,
                             std::span<const EdgeIndex> pool, const std::vector<int>* order,
                             const Emit& emit) const {
  std::vector<Slot> slots;
  Matching m = base;
  if (order != nullptr) {
    std::size_t prefix = 0;
    while (prefix < order->size() && base.edges[(*order)[prefix]] != kUnbound) ++prefix;
    for (std::size_t i = prefix; i < order->size(); ++i) {
      if (base.edges[(*order)[i]] != kUnbound) {
        throw std::invalid_argument("matching does not bind an order prefix");
      }
      slots.push_back({(*order)[i], &mask, pool});
    }
    run(m, slots, 0, Mode::Chain, false, emit);
    return;
  }
  for (int v = 0; v < static_cast<int>(p_.width()); ++v) {
    if (base.edges[v] == kUnbound) slots.push_back({v, &mask, pool});
  }
  run(m, slots, 0, Mode::Subsets, false, emit);
}

bool PatternJoin::extensible(const Matching& m, const std::vector<char>& mask,
                             std::span<const EdgeIndex> pool) const {
  Matching work = m;
  bool found = false;
  for (int v = 0; v < static_cast<int>(p_.width()) && !found; ++v) {
    if (m.edges[v] != kUnbound) continue;
    const Slot slot{v, &mask, pool};
    run(work, std::span<const Slot>(&slot, 1), 0, Mode::Exact, false,
        [&](const Matching&) { found = true; });
  }
  return found;
}

std::vector<Matching> match_total(const TemporalGraph& g, const Bgp& p, MatchOptions opts) {
  PatternJoin join(g, p, opts);
  std::vector<Matching> out;
  std::vector<EdgeIndex> all(g.num_edges());
  std::iota(all.begin(), all.end(), EdgeIndex{0});
  join.totals(nullptr, all, [&](const Matching& m) { out.push_back(m); });
  sort_by_ids(g, out);
  return out;
}

std::vector<Matching> match_within(const TemporalGraph& g, const Bgp& p,
                                   std::span<const EdgeIndex> edges, MatchOptions opts) {
  PatternJoin join(g, p, opts);
  const auto mask = edge_mask(g, edges);
  std::vector<Matching> out;
  join.totals(&mask, edges, [&](const Matching& m) { out.push_back(m); });
  sort_by_ids(g, out);
  return out;
}

std::vector<Matching> match_partial_maximal(const TemporalGraph& g,
                                            std::span<const EdgeIndex> edges, const Bgp& p,
                                            MatchOptions opts) {
  PatternJoin join(g, p, opts);
  const auto mask = edge_mask(g, edges);
  std::vector<Matching> out;
  join.partials(mask, edges, [&](const Matching& m) {
    if (!join.extensible(m, mask, edges)) out.push_back(m);
  });
  sort_by_ids(g, out);
  return out;
}

std::vector<Matching> delta_match(const TemporalGraph& g, const Bgp& p,
                                  std::span<const EdgeIndex> old_history,
                                  std::span<const EdgeIndex> new_edges, MatchOptions opts) {
  PatternJoin join(g, p, opts);
  const auto old_mask = edge_mask(g, old_history);
  const auto new_mask = edge_mask(g, new_edges);
  for (const auto e : new_edges) {
    if (old_mask[e]) throw std::invalid_argument("new edges must be disjoint from the history");
  }
  std::vector<Matching> out;
  join.delta(old_mask, old_history, new_mask, new_edges,
             [&](const Matching& m) { out.push_back(m); });
  sort_by_ids(g, out);
  return out;
}

std::vector<Extension> extend(const TemporalGraph& g, const Bgp& p,
                              std::span<const Matching> states,
                              std::span<const EdgeIndex> new_edges,
                              std::span<const EdgeIndex> history, MatchOptions opts) {
  PatternJoin join(g, p, opts);
  const auto mask = edge_mask(g, history);
  for (const auto e : new_edges) {
    if (!mask[e]) throw std::invalid_argument("history must include the new edges");
  }
  std::vector<Extension> out;
  for (const auto& mu : states) {
    if (!join.extensible(mu, mask, history)) {
      out.push_back({mu, mu});
      continue;
    }
    join.extensions(mu, mask, history, nullptr, [&](const Matching& next) {
      if (!join.extensible(next, mask, history)) out.push_back({mu, next});
    });
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace tempo
