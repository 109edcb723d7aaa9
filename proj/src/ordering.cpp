// SPDX-License-Identifier: Apache-2.0
#include "tempo/ordering.hpp"

#include <algorithm>
#include <numeric>

namespace tempo {
namespace {

void check_permutation(const std::vector<int>& order, std::size_t width) {
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted.size() != width || sorted[i] != static_cast<int>(i)) {
      throw std::invalid_argument("order is not a permutation of the edge variables");
    }
  }
  if (order.size() != width) throw std::invalid_argument("order has the wrong length");
}

// Vertex id of an endpoint: constants first, then node variables.
int vertex(const Bgp& p, const Endpoint& e) {
  return e.is_constant ? e.index : static_cast<int>(p.constants().size()) + e.index;
}

// Pair automaton over bits (i, j): state 0 = neither seen, 1 = j seen
// strictly first, 2 = i seen afterwards (accepting). -1 = leaves the language.
int pair_step(int q, bool bit_i, bool bit_j) {
  switch (q) {
    case 0:
      if (bit_i) return -1;
      return bit_j ? 1 : 0;
    case 1: return bit_i ? 2 : 1;
    default: return 2;
  }
}

bool violates(const TimedAutomaton& ta, int i, int j) {
  const Letter bi = Letter{1} << i;
  const Letter bj = Letter{1} << j;
  const int n = ta.num_states();
  std::vector<char> seen(static_cast<std::size_t>(n) * 3, 0);
  std::vector<std::pair<int, int>> stack{{ta.initial(), 0}};
  seen[ta.initial() * 3] = 1;
  while (!stack.empty()) {
    const auto [s, q] = stack.back();
    stack.pop_back();
    if (q == 2 && ta.is_accepting(s)) return true;
    for (const auto& t : ta.transitions()) {
      if (t.from != s) continue;
      for (int combo = 0; combo < 4; ++combo) {
        const Letter l = ((combo & 1) ? bi : 0) | ((combo & 2) ? bj : 0);
        const Letter fixed = bi | bj;
        const bool possible = std::any_of(t.theta.begin(), t.theta.end(), [&](const LetterPattern& p) {
          return ((p.value ^ l) & p.care & fixed) == 0;
        });
        if (!possible) continue;
        const int nq = pair_step(q, combo & 1, combo & 2);
        if (nq < 0) continue;
        auto& mark = seen[t.to * 3 + nq];
        if (!mark) {
          mark = 1;
          stack.emplace_back(t.to, nq);
        }
      }
    }
  }
  return false;
}

}  // namespace

std::string_view to_string(Compatibility c) {
  switch (c) {
    case Compatibility::Compatible: return "Compatible";
    case Compatibility::Incompatible: return "Incompatible";
    case Compatibility::Unknown: return "Unknown";
  }
  return "?";
}

bool is_connected_order(const Bgp& p, const std::vector<int>& order) {
  check_permutation(order, p.width());
  const int n = static_cast<int>(p.constants().size() + p.node_vars().size());
  // Each new edge must touch a vertex already covered by the prefix.
  std::vector<char> used(n, 0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& y = p.edge_vars()[order[k]];
    const int a = vertex(p, y.src);
    const int b = vertex(p, y.dst);
    if (k > 0 && !used[a] && !used[b]) return false;
    used[a] = used[b] = 1;
  }
  return true;
}

Compatibility is_compatible_order(const TimedAutomaton& ta, const std::vector<int>& order) {
  check_permutation(order, ta.width());
  bool violated = false;
  for (std::size_t a = 0; a < order.size() && !violated; ++a) {
    for (std::size_t b = a + 1; b < order.size() && !violated; ++b) {
      violated = violates(ta, order[a], order[b]);
    }
  }
  if (!violated) return Compatibility::Compatible;
  const bool exact = std::all_of(ta.transitions().begin(), ta.transitions().end(),
                                 [](const Transition& t) { return t.guard.is_true(); });
  return exact ? Compatibility::Incompatible : Compatibility::Unknown;
}

std::optional<std::vector<int>> search_order(const Bgp& p, const TimedAutomaton& ta) {
  std::vector<int> order(p.width());
  std::iota(order.begin(), order.end(), 0);
  do {
    if (is_connected_order(p, order) &&
        is_compatible_order(ta, order) == Compatibility::Compatible) {
      return order;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return std::nullopt;
}

std::vector<int> parse_order(const Bgp& p, std::string_view text) {
  std::vector<int> order;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto pos = text.find(',', start);
    if (pos == std::string_view::npos) pos = text.size();
    const auto name = trim(text.substr(start, pos - start));
    const auto v = p.find_edge_var(name);
    if (!v) throw ParseError("unknown edge variable '" + std::string(name) + "' in order");
    order.push_back(*v);
    start = pos + 1;
  }
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.size() != p.width() || std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ParseError("order must list every edge variable exactly once");
  }
  return order;
}

std::string format_order(const Bgp& p, const std::vector<int>& order) {
  std::string s;
  for (const int v : order) {
    if (!s.empty()) s += ',';
    s += p.edge_vars()[v].name;
  }
  return s;
}

}  // namespace tempo
