// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "tempo/bgp.hpp"
#include "tempo/temporal_graph.hpp"
#include "tempo/timed_automaton.hpp"

namespace test {

inline std::filesystem::path fixtures() { return TEMPO_FIXTURE_DIR; }

inline const tempo::TemporalGraph& fig1() {
  static const auto g = tempo::TemporalGraph::load(fixtures() / "fig1");
  return g;
}

inline tempo::Bgp pattern(const std::string& name) {
  return tempo::Bgp::load((fixtures() / "bgp" / (name + ".bgp")).string());
}

inline tempo::TimedAutomaton automaton(const std::string& name, std::size_t width) {
  return tempo::TimedAutomaton::load(fixtures() / "ta" / (name + ".ta"), width);
}

/// Edge ids of an edge list, in list order.
inline std::vector<std::string> ids(const tempo::TemporalGraph& g,
                                    const std::vector<tempo::EdgeIndex>& es) {
  std::vector<std::string> out;
  for (auto e : es) out.push_back(g.edge_id(e));
  return out;
}

inline std::vector<std::string> formatted(const tempo::TemporalGraph& g, const tempo::Bgp& p,
                                          const std::vector<tempo::Matching>& ms) {
  std::vector<std::string> out;
  for (const auto& m : ms) out.push_back(tempo::format_matching(g, p, m));
  return out;
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("tempo-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name) << text;
  }

 private:
  std::filesystem::path path_;
};

}  // namespace test
