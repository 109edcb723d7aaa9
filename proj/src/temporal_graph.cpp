// SPDX-License-Identifier: Apache-2.0
#include "tempo/temporal_graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace tempo {
namespace {

struct CsvRow {
  std::size_t line;
  std::vector<std::string_view> fields;
};

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Owns the file text; rows view into it.
class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, std::string_view header) : path_(path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    text_ = ss.str();

    std::string_view rest = text_;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (!rest.empty()) {
      const auto nl = rest.find('\n');
      auto line = trim(rest.substr(0, nl));
      rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
      ++line_no;
      if (line.empty()) continue;
      if (!saw_header) {
        if (line != header) {
          throw ParseError(where(line_no) + "expected header '" + std::string(header) + "'");
        }
        saw_header = true;
        continue;
      }
      rows_.push_back({line_no, split_fields(line)});
    }
    if (!saw_header) throw ParseError(path.string() + ": missing header");
    columns_ = split_fields(header).size();
    for (const auto& row : rows_) {
      if (row.fields.size() != columns_) {
        throw ParseError(where(row.line) + "expected " + std::to_string(columns_) + " fields");
      }
      for (auto f : row.fields) {
        if (f.empty()) throw ParseError(where(row.line) + "empty field");
      }
    }
  }

  const std::vector<CsvRow>& rows() const { return rows_; }
  std::string where(std::size_t line) const {
    return path_.string() + ":" + std::to_string(line) + ": ";
  }

 private:
  std::filesystem::path path_;
  std::string text_;
  std::vector<CsvRow> rows_;
  std::size_t columns_ = 0;
};

}  // namespace

NodeIndex TemporalGraph::Builder::add_node(std::string id, std::string label) {
  if (node_index_.contains(id) || edge_index_.contains(id)) {
    throw DuplicateError("duplicate identifier '" + id + "'");
  }
  const auto n = static_cast<NodeIndex>(node_ids_.size());
  node_index_.emplace(id, n);
  node_ids_.push_back(std::move(id));
  node_labels_.push_back(std::move(label));
  return n;
}

EdgeIndex TemporalGraph::Builder::add_edge(std::string id, std::string_view src,
                                           std::string_view dst, std::string label) {
  if (node_index_.contains(id) || edge_index_.contains(id)) {
    throw DuplicateError("duplicate identifier '" + id + "'");
  }
  const auto s = node_index_.find(std::string(src));
  const auto d = node_index_.find(std::string(dst));
  if (s == node_index_.end() || d == node_index_.end()) {
    throw ReferenceError("edge '" + id + "' references unknown node '" +
                         std::string(s == node_index_.end() ? src : dst) + "'");
  }
  const auto e = static_cast<EdgeIndex>(edges_.size());
  edge_index_.emplace(id, e);
  edge_ids_.push_back(std::move(id));
  edges_.push_back({s->second, d->second, std::move(label)});
  active_.emplace_back();
  return e;
}

void TemporalGraph::Builder::add_activation(std::string_view edge_id, Timepoint t) {
  const auto it = edge_index_.find(std::string(edge_id));
  if (it == edge_index_.end()) {
    throw ReferenceError("activation references unknown edge '" + std::string(edge_id) + "'");
  }
  add_activation(it->second, t);
}

void TemporalGraph::Builder::add_activation(EdgeIndex e, Timepoint t) {
  if (!(t > 0.0)) throw ParseError("timepoints must be strictly positive, got " + format_time(t));
  active_.at(static_cast<std::size_t>(e)).push_back(t);
}

TemporalGraph TemporalGraph::Builder::build() && {
  TemporalGraph g;
  g.node_ids_ = std::move(node_ids_);
  g.node_labels_ = std::move(node_labels_);
  g.node_index_ = std::move(node_index_);
  g.edge_ids_ = std::move(edge_ids_);
  g.edges_ = std::move(edges_);
  g.edge_index_ = std::move(edge_index_);
  g.active_ = std::move(active_);

  g.out_.resize(g.num_nodes());
  g.in_.resize(g.num_nodes());
  for (EdgeIndex e = 0; e < static_cast<EdgeIndex>(g.edges_.size()); ++e) {
    g.out_[g.edges_[e].src].push_back(e);
    g.in_[g.edges_[e].dst].push_back(e);
  }

  for (auto& times : g.active_) {
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    g.domain_.insert(g.domain_.end(), times.begin(), times.end());
  }
  std::sort(g.domain_.begin(), g.domain_.end());
  g.domain_.erase(std::unique(g.domain_.begin(), g.domain_.end()), g.domain_.end());

  g.snapshots_.resize(g.domain_.size());
  g.first_seen_rank_.assign(g.edges_.size(), 0);
  for (EdgeIndex e = 0; e < static_cast<EdgeIndex>(g.edges_.size()); ++e) {
    for (const auto t : g.active_[e]) {
      const auto rank = *g.rank_of(t);
      g.snapshots_[rank - 1].push_back(e);
      if (g.first_seen_rank_[e] == 0) g.first_seen_rank_[e] = rank;
    }
  }
  return g;
}

TemporalGraph TemporalGraph::load(const std::filesystem::path& dir) {
  return load(dir / "node.csv", dir / "edge.csv", dir / "active.csv");
}

TemporalGraph TemporalGraph::load(const std::filesystem::path& node_path,
                                  const std::filesystem::path& edge_path,
                                  const std::filesystem::path& active_path) {
  const CsvFile nodes(node_path, "vid,label");
  const CsvFile edges(edge_path, "eid,src,dst,label");
  const CsvFile active(active_path, "eid,time");

  Builder b;
  for (const auto& row : nodes.rows()) {
    try {
      b.add_node(std::string(row.fields[0]), std::string(row.fields[1]));
    } catch (const DuplicateError& err) {
      throw DuplicateError(nodes.where(row.line) + err.what());
    }
  }
  for (const auto& row : edges.rows()) {
    try {
      b.add_edge(std::string(row.fields[0]), row.fields[1], row.fields[2],
                 std::string(row.fields[3]));
    } catch (const ReferenceError& err) {
      throw ReferenceError(edges.where(row.line) + err.what());
    } catch (const DuplicateError& err) {
      throw DuplicateError(edges.where(row.line) + err.what());
    }
  }
  for (const auto& row : active.rows()) {
    try {
      b.add_activation(row.fields[0], parse_time(row.fields[1]));
    } catch (const ReferenceError& err) {
      throw ReferenceError(active.where(row.line) + err.what());
    } catch (const ParseError& err) {
      throw ParseError(active.where(row.line) + err.what());
    }
  }
  return std::move(b).build();
}

std::optional<NodeIndex> TemporalGraph::find_node(std::string_view id) const {
  const auto it = node_index_.find(std::string(id));
  if (it == node_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeIndex> TemporalGraph::find_edge(std::string_view id) const {
  const auto it = edge_index_.find(std::string(id));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

bool TemporalGraph::is_active(EdgeIndex e, Timepoint t) const {
  return std::binary_search(active_[e].begin(), active_[e].end(), t);
}

std::optional<std::size_t> TemporalGraph::rank_of(Timepoint t) const {
  const auto it = std::lower_bound(domain_.begin(), domain_.end(), t);
  if (it == domain_.end() || *it != t) return std::nullopt;
  return static_cast<std::size_t>(it - domain_.begin()) + 1;
}

std::optional<Timepoint> TemporalGraph::first_seen(EdgeIndex e) const {
  if (active_[e].empty()) return std::nullopt;
  return active_[e].front();
}

std::span<const EdgeIndex> TemporalGraph::snapshot(Timepoint t) const {
  const auto rank = rank_of(t);
  if (!rank) return {};
  return snapshots_[*rank - 1];
}

std::vector<EdgeIndex> TemporalGraph::history_upto(std::size_t rank) const {
  if (rank > domain_.size()) {
    throw std::out_of_range("history rank " + std::to_string(rank) + " exceeds domain size " +
                            std::to_string(domain_.size()));
  }
  std::vector<EdgeIndex> out;
  for (EdgeIndex e = 0; e < static_cast<EdgeIndex>(edges_.size()); ++e) {
    if (first_seen_rank_[e] != 0 && first_seen_rank_[e] <= rank) out.push_back(e);
  }
  return out;
}

void write_graph(const TemporalGraph& g, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / name).string());
    return out;
  };
  auto nodes = open("node.csv");
  nodes << "vid,label\n";
  for (NodeIndex n = 0; n < static_cast<NodeIndex>(g.num_nodes()); ++n) {
    nodes << g.node_id(n) << ',' << g.node_label(n) << '\n';
  }
  auto edges = open("edge.csv");
  edges << "eid,src,dst,label\n";
  auto active = open("active.csv");
  active << "eid,time\n";
  for (EdgeIndex e = 0; e < static_cast<EdgeIndex>(g.num_edges()); ++e) {
    const auto& edge = g.edge(e);
    edges << g.edge_id(e) << ',' << g.node_id(edge.src) << ',' << g.node_id(edge.dst) << ','
          << edge.label << '\n';
    for (const auto t : g.active(e)) active << g.edge_id(e) << ',' << format_time(t) << '\n';
  }
}

}  // namespace tempo
