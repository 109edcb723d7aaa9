// SPDX-License-Identifier: Apache-2.0
#include "tempo/bgp.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "tempo/temporal_graph.hpp"

namespace tempo {
namespace {

std::vector<std::string_view> split(std::string_view s, std::string_view sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + sep.size();
  }
  return out;
}

bool valid_name(std::string_view name) {
  return !name.empty() && std::none_of(name.begin(), name.end(), [](char c) {
    return c == ' ' || c == '\t' || c == ':' || c == ',' || c == '=' || c == '#';
  });
}

std::optional<std::string> optional_label(std::string_view s, std::size_t line) {
  if (!valid_name(s)) throw ParseError("line " + std::to_string(line) + ": bad label");
  return std::string(s);
}

}  // namespace

void Bgp::check_fresh(const std::string& name) const {
  if (!valid_name(name)) throw ParseError("invalid name '" + name + "'");
  const bool taken =
      std::find(constants_.begin(), constants_.end(), name) != constants_.end() ||
      std::any_of(node_vars_.begin(), node_vars_.end(),
                  [&](const NodeVar& v) { return v.name == name; }) ||
      std::any_of(edge_vars_.begin(), edge_vars_.end(),
                  [&](const EdgeVar& v) { return v.name == name; });
  if (taken) throw ParseError("duplicate name '" + name + "'");
}

int Bgp::add_constant(std::string name) {
  check_fresh(name);
  constants_.push_back(std::move(name));
  return static_cast<int>(constants_.size()) - 1;
}

int Bgp::add_node_var(std::string name, std::optional<std::string> label) {
  check_fresh(name);
  node_vars_.push_back({std::move(name), std::move(label)});
  return static_cast<int>(node_vars_.size()) - 1;
}

Endpoint Bgp::resolve(std::string_view name) const {
  for (std::size_t i = 0; i < constants_.size(); ++i) {
    if (constants_[i] == name) return {true, static_cast<int>(i)};
  }
  for (std::size_t i = 0; i < node_vars_.size(); ++i) {
    if (node_vars_[i].name == name) return {false, static_cast<int>(i)};
  }
  throw ParseError("unknown endpoint '" + std::string(name) + "'");
}

int Bgp::add_edge_var(std::string name, std::string_view src, std::string_view dst,
                      std::optional<std::string> label) {
  check_fresh(name);
  if (edge_vars_.size() >= 64) throw ParseError("at most 64 edge variables are supported");
  edge_vars_.push_back({std::move(name), resolve(src), resolve(dst), std::move(label)});
  return static_cast<int>(edge_vars_.size()) - 1;
}

Bgp Bgp::parse(std::string_view text) {
  Bgp p;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto sp = line.find_first_of(" \t");
    const auto keyword = line.substr(0, sp);
    const auto rest = sp == std::string_view::npos ? std::string_view{} : trim(line.substr(sp));
    const auto where = "line " + std::to_string(line_no) + ": ";
    try {
      if (keyword == "const") {
        p.add_constant(std::string(rest));
      } else if (keyword == "node") {
        const auto parts = split(rest, ":");
        if (parts.size() > 2) throw ParseError("expected 'node <name> [: <label>]'");
        p.add_node_var(std::string(parts[0]), parts.size() == 2
                                                  ? optional_label(parts[1], line_no)
                                                  : std::nullopt);
      } else if (keyword == "edge") {
        const auto parts = split(rest, ":");
        if (parts.size() < 2 || parts.size() > 3) {
          throw ParseError("expected 'edge <name> : <src> -> <dst> [: <label>]'");
        }
        const auto ends = split(parts[1], "->");
        if (ends.size() != 2) throw ParseError("expected '<src> -> <dst>'");
        p.add_edge_var(std::string(parts[0]), ends[0], ends[1],
                       parts.size() == 3 ? optional_label(parts[2], line_no) : std::nullopt);
      } else {
        throw ParseError("unknown declaration '" + std::string(keyword) + "'");
      }
    } catch (const ParseError& err) {
      throw ParseError(where + err.what());
    }
  }
  return p;
}

Bgp Bgp::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str());
  } catch (const ParseError& err) {
    throw ParseError(path + ": " + err.what());
  }
}

std::optional<int> Bgp::find_edge_var(std::string_view name) const {
  for (std::size_t i = 0; i < edge_vars_.size(); ++i) {
    if (edge_vars_[i].name == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::vector<int> Bgp::isolated_node_vars() const {
  std::vector<bool> used(node_vars_.size(), false);
  for (const auto& y : edge_vars_) {
    if (!y.src.is_constant) used[y.src.index] = true;
    if (!y.dst.is_constant) used[y.dst.index] = true;
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (!used[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

bool Matching::edges_complete() const {
  return std::none_of(edges.begin(), edges.end(), [](EdgeIndex e) { return e == kUnbound; });
}

bool Matching::is_total() const {
  return edges_complete() &&
         std::none_of(nodes.begin(), nodes.end(), [](NodeIndex n) { return n == kUnbound; });
}

std::uint64_t Matching::bound_mask() const {
  std::uint64_t mask = 0;
  for (std::size_t j = 0; j < edges.size(); ++j) {
    if (edges[j] != kUnbound) mask |= std::uint64_t{1} << j;
  }
  return mask;
}

bool Matching::contains(const Matching& other) const {
  for (std::size_t j = 0; j < edges.size(); ++j) {
    if (other.edges[j] != kUnbound && other.edges[j] != edges[j]) return false;
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (other.nodes[i] != kUnbound && other.nodes[i] != nodes[i]) return false;
  }
  return true;
}

std::size_t MatchingHash::operator()(const Matching& m) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  auto mix = [&](std::int32_t v) {
    h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(v)) + 0x9e3779b97f4a7c15ULL +
         (h << 6) + (h >> 2);
  };
  for (auto e : m.edges) mix(e);
  for (auto n : m.nodes) mix(n);
  return h;
}

bool less_by_ids(const TemporalGraph& g, const Matching& a, const Matching& b) {
  auto cmp = [](std::int32_t x, std::int32_t y, auto&& id) {
    if (x == y) return 0;
    if (x == kUnbound) return -1;
    if (y == kUnbound) return 1;
    const int c = id(x).compare(id(y));
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  };
  for (std::size_t j = 0; j < a.edges.size(); ++j) {
    const int c = cmp(a.edges[j], b.edges[j],
                      [&](std::int32_t e) -> const std::string& { return g.edge_id(e); });
    if (c != 0) return c < 0;
  }
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    const int c = cmp(a.nodes[i], b.nodes[i],
                      [&](std::int32_t n) -> const std::string& { return g.node_id(n); });
    if (c != 0) return c < 0;
  }
  return false;
}

void sort_by_ids(const TemporalGraph& g, std::vector<Matching>& ms) {
  std::sort(ms.begin(), ms.end(),
            [&](const Matching& a, const Matching& b) { return less_by_ids(g, a, b); });
}

std::string format_matching(const TemporalGraph& g, const Bgp& p, const Matching& m) {
  std::string out = "(";
  for (std::size_t j = 0; j < m.edges.size(); ++j) {
    if (j > 0) out += ',';
    out += m.edges[j] == kUnbound ? std::string("-") : g.edge_id(m.edges[j]);
  }
  out += ')';
  for (const int x : p.isolated_node_vars()) {
    if (m.nodes[x] == kUnbound) continue;
    out += ' ' + p.node_vars()[x].name + '=' + g.node_id(m.nodes[x]);
  }
  return out;
}

}  // namespace tempo
