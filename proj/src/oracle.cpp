// SPDX-License-Identifier: Apache-2.0
#include "tempo/oracle.hpp"

#include <cmath>

namespace tempo::oracle {
namespace {

// Definition-level check of a (possibly partial) edge-induced assignment.
// Node variables incident to bound edge variables are filled in from the
// first bound incident edge; returns false on any violated clause.
bool complete_and_check(const TemporalGraph& g, const Bgp& p, Matching& m, bool distinct) {
  for (auto& n : m.nodes) n = kUnbound;
  const auto& ys = p.edge_vars();
  for (std::size_t j = 0; j < ys.size(); ++j) {
    if (m.edges[j] == kUnbound) continue;
    const auto& e = g.edge(m.edges[j]);
    for (const auto& [ep, node] : {std::pair{ys[j].src, e.src}, std::pair{ys[j].dst, e.dst}}) {
      if (!ep.is_constant && m.nodes[ep.index] == kUnbound) m.nodes[ep.index] = node;
    }
  }
  for (std::size_t j = 0; j < ys.size(); ++j) {
    if (m.edges[j] == kUnbound) continue;
    const auto& e = g.edge(m.edges[j]);
    if (ys[j].label && *ys[j].label != e.label) return false;
    for (const auto& [ep, node] : {std::pair{ys[j].src, e.src}, std::pair{ys[j].dst, e.dst}}) {
      if (ep.is_constant) {
        if (g.node_id(node) != p.constants()[ep.index]) return false;
      } else if (m.nodes[ep.index] != node) {
        return false;
      }
    }
    if (distinct) {
      for (std::size_t k = 0; k < j; ++k) {
        if (m.edges[k] == m.edges[j]) return false;
      }
    }
  }
  for (std::size_t x = 0; x < m.nodes.size(); ++x) {
    const auto n = m.nodes[x];
    const auto& label = p.node_vars()[x].label;
    if (n != kUnbound && label && g.node_label(n) != *label) return false;
  }
  return true;
}

// Odometer over `slots` digits with `base` values each; value -1 means unbound
// when `allow_unbound`.
template <typename F>
void odometer(std::size_t slots, int base, bool allow_unbound, F&& visit) {
  const int lo = allow_unbound ? -1 : 0;
  if (base == 0 && !allow_unbound && slots > 0) return;
  std::vector<int> digit(slots, lo);
  while (true) {
    visit(digit);
    std::size_t k = 0;
    while (k < slots && ++digit[k] == base) digit[k++] = lo;
    if (k == slots) return;
  }
}

}  // namespace

std::vector<Matching> match(const TemporalGraph& g, const Bgp& p, bool distinct_edges) {
  const auto iso = p.isolated_node_vars();
  const double work = std::pow(static_cast<double>(g.num_edges()), static_cast<double>(p.width())) *
                      std::pow(static_cast<double>(g.num_nodes()), static_cast<double>(iso.size()));
  if (work > kMaxAssignments) throw GuardError("instance too large for the oracle");
  std::vector<Matching> out;
  odometer(p.width(), static_cast<int>(g.num_edges()), false, [&](const std::vector<int>& es) {
    Matching m = Matching::empty(p);
    for (std::size_t j = 0; j < es.size(); ++j) m.edges[j] = es[j];
    if (!complete_and_check(g, p, m, distinct_edges)) return;
    odometer(iso.size(), static_cast<int>(g.num_nodes()), false, [&](const std::vector<int>& ns) {
      Matching full = m;
      for (std::size_t k = 0; k < iso.size(); ++k) {
        const auto& label = p.node_vars()[iso[k]].label;
        if (label && g.node_label(ns[k]) != *label) return;
        full.nodes[iso[k]] = ns[k];
      }
      out.push_back(full);
    });
  });
  sort_by_ids(g, out);
  return out;
}

std::vector<Matching> partial_matchings(const TemporalGraph& g, std::span<const EdgeIndex> edges,
                                        const Bgp& p, bool distinct_edges) {
  const double work = std::pow(static_cast<double>(edges.size() + 1), static_cast<double>(p.width()));
  if (work > kMaxAssignments) throw GuardError("instance too large for the oracle");
  std::vector<Matching> out;
  odometer(p.width(), static_cast<int>(edges.size()), true, [&](const std::vector<int>& es) {
    Matching m = Matching::empty(p);
    for (std::size_t j = 0; j < es.size(); ++j) m.edges[j] = es[j] < 0 ? kUnbound : edges[es[j]];
    if (complete_and_check(g, p, m, distinct_edges)) out.push_back(m);
  });
  sort_by_ids(g, out);
  return out;
}

std::vector<Matching> maximal_partials(const TemporalGraph& g, std::span<const EdgeIndex> edges,
                                       const Bgp& p, bool distinct_edges) {
  const auto all = partial_matchings(g, edges, p, distinct_edges);
  std::vector<Matching> out;
  for (const auto& m : all) {
    bool extendable = false;
    for (const auto& other : all) {
      if (other != m && other.contains(m)) {
        extendable = true;
        break;
      }
    }
    if (!extendable) out.push_back(m);
  }
  return out;
}

TimedWord word_of(const TemporalGraph& g, const Matching& m) {
  TimedWord word;
  for (const auto t : g.domain()) {
    Letter letter = 0;
    for (std::size_t j = 0; j < m.edges.size(); ++j) {
      if (m.edges[j] == kUnbound) continue;
      for (const auto u : g.active(m.edges[j])) {
        if (u == t) letter |= Letter{1} << j;
      }
    }
    word.emplace_back(t, letter);
  }
  return word;
}

std::vector<std::set<Config>> configurations(const TimedAutomaton& ta, const TimedWord& word) {
  // Expand every letter predicate into its concrete letters from the text form.
  const std::size_t width = ta.width();
  std::vector<std::set<Letter>> letters;
  for (const auto& t : ta.transitions()) {
    std::set<Letter> concrete;
    for (const auto& pat : t.theta) {
      const std::string text = format_pattern(pat, width);
      std::vector<Letter> partial{0};
      for (std::size_t j = 0; j < width; ++j) {
        std::vector<Letter> next;
        for (const Letter l : partial) {
          if (text[j] != '1') next.push_back(l);
          if (text[j] != '0') next.push_back(l | (Letter{1} << j));
        }
        partial.swap(next);
      }
      concrete.insert(partial.begin(), partial.end());
    }
    letters.push_back(std::move(concrete));
  }

  auto guard_ok = [](const ClockGuard& g, const std::vector<double>& clocks) {
    for (const auto& c : g.conjuncts) {
      const double v = clocks[c.clock];
      bool ok = false;
      switch (c.op) {
        case Comparator::Less: ok = v < c.bound; break;
        case Comparator::LessEq: ok = !(v > c.bound); break;
        case Comparator::Greater: ok = v > c.bound; break;
        case Comparator::GreaterEq: ok = !(v < c.bound); break;
      }
      if (!ok) return false;
    }
    return true;
  };

  std::vector<std::set<Config>> out;
  out.push_back({Config{ta.initial(), std::vector<double>(ta.num_clocks(), 0.0)}});
  Timepoint prev = 0;
  for (const auto& [t, letter] : word) {
    std::set<Config> next;
    for (auto cfg : out.back()) {
      for (auto& c : cfg.clocks) c += t - prev;
      for (std::size_t k = 0; k < ta.transitions().size(); ++k) {
        const auto& tr = ta.transitions()[k];
        if (tr.from != cfg.state || !letters[k].count(letter)) continue;
        if (!guard_ok(tr.guard, cfg.clocks)) continue;
        Config succ{tr.to, cfg.clocks};
        for (const int r : tr.resets) succ.clocks[r] = 0.0;
        next.insert(std::move(succ));
      }
    }
    prev = t;
    out.push_back(std::move(next));
  }
  return out;
}

bool accepts(const TimedAutomaton& ta, const TimedWord& word) {
  const auto sets = configurations(ta, word);
  for (const auto& c : sets.back()) {
    const auto acc = ta.accepting_states();
    for (const int s : acc) {
      if (s == c.state) return true;
    }
  }
  return false;
}

std::vector<Matching> evaluate(const TemporalGraph& g, const Bgp& p, const TimedAutomaton& ta,
                               bool distinct_edges) {
  std::vector<Matching> out;
  for (const auto& m : match(g, p, distinct_edges)) {
    if (accepts(ta, word_of(g, m))) out.push_back(m);
  }
  return out;
}

}  // namespace tempo::oracle
