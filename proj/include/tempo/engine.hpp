// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tempo/bgp.hpp"
#include "tempo/matcher.hpp"
#include "tempo/temporal_graph.hpp"
#include "tempo/timed_automaton.hpp"

namespace tempo {

class EngineError : public Error {
 public:
  enum class Kind { WidthMismatch, OrderNotConnected, OrderIncompatible };
  EngineError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// One States row as seen right after a step.
struct TraceRow {
  Matching matching;
  int state = 0;
  std::vector<Timepoint> last_reset;
  Letter letter = 0;  // letter just read; 0 in the initial frame
};

struct TraceDrop {
  Matching matching;
  Letter letter = 0;
};

/// A matching found on demand and replayed over the earlier letters.
struct TraceCatchUp {
  Matching matching;
  std::optional<Timepoint> died_at;  // letter time at which the replay emptied
};

struct TraceFrame {
  std::size_t index = 0;  // 0 is the virtual start time
  Timepoint time = 0;
  std::vector<TraceRow> rows;
  std::vector<TraceDrop> dropped;
  std::vector<TraceCatchUp> caught_up;
};

struct EngineOptions {
  bool early_accept = true;
  bool early_reject = true;
  /// Skip automaton work for a matching until one of its edges is active
  /// (only when the automaton allows it, see TimedAutomaton::dead_start).
  bool first_seen = true;
  MatchOptions match;
  /// Partial-match only: generate partial matchings along this order.
  std::optional<std::vector<int>> order;
  std::function<void(const TraceFrame&)> trace;
};

struct EngineCounters {
  std::uint64_t rows_processed = 0;  // configurations stepped
  std::uint64_t matchings_generated = 0;
  std::uint64_t rejected = 0;
  std::uint64_t early_rejected = 0;
  std::uint64_t early_accepted = 0;
  std::uint64_t order_unknown = 0;  // order compatibility could not be decided
};

struct AcceptedMatching {
  Matching matching;
  Timepoint time = 0;
};

struct EngineResult {
  std::vector<AcceptedMatching> accepted;  // sorted by identifiers
  EngineCounters counters;

  std::vector<Matching> matchings() const;
};

EngineResult run_baseline(const TemporalGraph& g, const Bgp& p, const TimedAutomaton& ta,
                          const EngineOptions& opts = {});

namespace detail {

struct StateEntry {
  Matching matching;
  std::vector<Configuration> configs;
};

/// States table plus the stepping logic shared by all engines.
class StatesTable {
 public:
  StatesTable(const TemporalGraph& g, const Bgp& p, const TimedAutomaton& ta,
              const EngineOptions& opts);

  std::vector<StateEntry>& rows() { return rows_; }
  EngineCounters& counters() { return counters_; }

  /// Letter of `m` given a mask of edges active now.
  Letter letter(const Matching& m, const std::vector<char>& active) const;

  /// Steps every row on the current snapshot; rows that die or early-accept
  /// leave the table. Partial rows never accept.
  void step_all(std::size_t index, Timepoint now, const std::vector<char>& active,
                std::vector<TraceDrop>* dropped);

  /// Applies early reject to `configs` in place; returns false when empty.
  bool prune(std::vector<Configuration>& configs, bool& by_early_reject) const;
  bool early_accepts(const std::vector<Configuration>& configs) const;

  /// Emits `m` (total on edges) with isolated node variables expanded.
  void accept(const Matching& m, Timepoint t);

  /// Runs the automaton from the start over `times`, probing each edge's
  /// activity; false when the run died or early-accepted (then it is
  /// already recorded).
  bool replay(const Matching& m, std::span<const Timepoint> times, Timepoint now,
              std::vector<Configuration>& configs, std::optional<Timepoint>& died_at);

  /// Accepts remaining total rows that end in an accepting state.
  EngineResult finish(Timepoint end);

  void emit_frame(std::size_t index, Timepoint now, const std::vector<char>* active,
                  std::vector<TraceDrop> dropped, std::vector<TraceCatchUp> caught_up) const;

  const TimedAutomaton& automaton() const { return ta_; }
  bool skip_idle() const { return skip_idle_; }

 private:
  const TemporalGraph& g_;
  const Bgp& p_;
  const TimedAutomaton& ta_;
  const EngineOptions& opts_;
  PatternJoin join_;
  Configuration initial_;
  bool skip_idle_;
  std::vector<StateEntry> rows_;
  std::vector<AcceptedMatching> accepted_;
  EngineCounters counters_;
  std::vector<Configuration> scratch_;
};

}  // namespace detail

/// Streaming engine that matches incrementally and replays the automaton
/// for each new matching. Snapshots must arrive in increasing time order.
class OnDemandRun {
 public:
  OnDemandRun(const TemporalGraph& g, const Bgp& p, const TimedAutomaton& ta,
              EngineOptions opts = {});
  void advance(Timepoint t, std::span<const EdgeIndex> snapshot);
  EngineResult finish();

 private:
  const TemporalGraph& g_;
  const Bgp& p_;
  EngineOptions opts_;
  PatternJoin join_;
  detail::StatesTable table_;
  std::vector<Timepoint> times_;
  std::vector<char> seen_;
  std::vector<EdgeIndex> history_;
  std::vector<char> active_;
};

/// Streaming engine over partial matchings. States always holds the empty
/// matching; a partial matching is extended only by edges that are new in
/// the current snapshot, before the snapshot's letter is read.
class PartialMatchRun {
 public:
  PartialMatchRun(const TemporalGraph& g, const Bgp& p, const TimedAutomaton& ta,
                  EngineOptions opts = {});
  void advance(Timepoint t, std::span<const EdgeIndex> snapshot);
  EngineResult finish();

  const std::vector<detail::StateEntry>& rows() { return table_.rows(); }

 private:
  const TemporalGraph& g_;
  const Bgp& p_;
  EngineOptions opts_;
  PatternJoin join_;
  detail::StatesTable table_;
  std::vector<Timepoint> times_;
  std::vector<char> seen_;
  std::vector<EdgeIndex> history_;
  std::vector<char> active_;
};

EngineResult run_on_demand(const TemporalGraph& g, const Bgp& p, const TimedAutomaton& ta,
                           const EngineOptions& opts = {});
EngineResult run_partial_match(const TemporalGraph& g, const Bgp& p, const TimedAutomaton& ta,
                               const EngineOptions& opts = {});

enum class Algorithm { Baseline, OnDemand, Partial };
std::optional<Algorithm> parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm a);
EngineResult run(Algorithm a, const TemporalGraph& g, const Bgp& p, const TimedAutomaton& ta,
                 const EngineOptions& opts = {});

}  // namespace tempo
