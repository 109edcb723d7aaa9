// SPDX-License-Identifier: Apache-2.0
#include "tempo/engine.hpp"

#include <algorithm>

#include "tempo/ordering.hpp"

namespace tempo {
namespace {

void check_width(const Bgp& p, const TimedAutomaton& ta) {
  if (ta.width() != p.width()) {
    throw EngineError(EngineError::Kind::WidthMismatch,
                      "automaton reads " + std::to_string(ta.width()) +
                          "-bit letters but the pattern has " + std::to_string(p.width()) +
                          " edge variables");
  }
}

void mark(std::vector<char>& mask, std::span<const EdgeIndex> edges, char value) {
  for (const auto e : edges) mask[e] = value;
}

}  // namespace

std::vector<Matching> EngineResult::matchings() const {
  std::vector<Matching> out;
  out.reserve(accepted.size());
  for (const auto& a : accepted) out.push_back(a.matching);
  return out;
}

namespace detail {

StatesTable::StatesTable(const TemporalGraph& g, const Bgp& p, const TimedAutomaton& ta,
                         const EngineOptions& opts)
    : g_(g),
      p_(p),
      ta_(ta),
      opts_(opts),
      join_(g, p, opts.match),
      initial_(ta.initial_configuration()),
      skip_idle_(opts.first_seen && ta.dead_start()) {
  check_width(p, ta);
}

Letter StatesTable::letter(const Matching& m, const std::vector<char>& active) const {
  Letter l = 0;
  for (std::size_t j = 0; j < m.edges.size(); ++j) {
    const auto e = m.edges[j];
    if (e != kUnbound && active[e]) l |= Letter{1} << j;
  }
  return l;
}

bool StatesTable::prune(std::vector<Configuration>& configs, bool& by_early_reject) const {
  by_early_reject = false;
  if (configs.empty()) return false;
  if (opts_.early_reject) {
    std::erase_if(configs, [&](const Configuration& c) { return ta_.is_early_reject(c.state); });
    by_early_reject = configs.empty();
  }
  return !configs.empty();
}

bool StatesTable::early_accepts(const std::vector<Configuration>& configs) const {
  return opts_.early_accept &&
         std::any_of(configs.begin(), configs.end(),
                     [&](const Configuration& c) { return ta_.is_early_accept(c.state); });
}

void StatesTable::accept(const Matching& m, Timepoint t) {
  if (m.is_total()) {
    accepted_.push_back({m, t});
    return;
  }
  join_.expand_isolated(m, [&](const Matching& full) { accepted_.push_back({full, t}); });
}

void StatesTable::step_all(std::size_t index, Timepoint now, const std::vector<char>& active,
                           std::vector<TraceDrop>* dropped) {
  (void)index;
  std::size_t keep = 0;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    auto& row = rows_[r];
    const Letter l = letter(row.matching, active);
    const bool idle = skip_idle_ && l == 0 && row.configs.size() == 1 &&
                      row.configs.front() == initial_;
    if (!idle) {
      counters_.rows_processed += row.configs.size();
      ta_.step(row.configs, l, now, scratch_);
      bool by_early_reject = false;
      if (!prune(scratch_, by_early_reject)) {
        ++(by_early_reject ? counters_.early_rejected : counters_.rejected);
        if (dropped != nullptr) dropped->push_back({row.matching, l});
        continue;
      }
      if (row.matching.edges_complete() && early_accepts(scratch_)) {
        ++counters_.early_accepted;
        accept(row.matching, now);
        continue;
      }
      row.configs.swap(scratch_);
    }
    if (keep != r) rows_[keep] = std::move(row);
    ++keep;
  }
  rows_.resize(keep);
}

bool StatesTable::replay(const Matching& m, std::span<const Timepoint> times, Timepoint now,
                         std::vector<Configuration>& configs,
                         std::optional<Timepoint>& died_at) {
  configs.assign(1, initial_);
  for (const auto t : times) {
    Letter l = 0;
    for (std::size_t j = 0; j < m.edges.size(); ++j) {
      if (m.edges[j] != kUnbound && g_.is_active(m.edges[j], t)) l |= Letter{1} << j;
    }
    if (skip_idle_ && l == 0 && configs.size() == 1 && configs.front() == initial_) continue;
    counters_.rows_processed += configs.size();
    ta_.step(configs, l, t, scratch_);
    configs.swap(scratch_);
    bool by_early_reject = false;
    if (!prune(configs, by_early_reject)) {
      ++(by_early_reject ? counters_.early_rejected : counters_.rejected);
      died_at = t;
      return false;
    }
    if (m.edges_complete() && early_accepts(configs)) {
      ++counters_.early_accepted;
      accept(m, now);
      return false;
    }
  }
  return true;
}

EngineResult StatesTable::finish(Timepoint end) {
  for (const auto& row : rows_) {
    if (!row.matching.edges_complete()) continue;
    if (ta_.any_accepting(row.configs)) {
      accept(row.matching, end);
    } else {
      ++counters_.rejected;
    }
  }
  rows_.clear();
  EngineResult result;
  result.accepted = std::move(accepted_);
  std::sort(result.accepted.begin(), result.accepted.end(),
            [&](const AcceptedMatching& a, const AcceptedMatching& b) {
              return less_by_ids(g_, a.matching, b.matching);
            });
  result.counters = counters_;
  return result;
}

void StatesTable::emit_frame(std::size_t index, Timepoint now, const std::vector<char>* active,
                             std::vector<TraceDrop> dropped,
                             std::vector<TraceCatchUp> caught_up) const {
  if (!opts_.trace) return;
  TraceFrame frame;
  frame.index = index;
  frame.time = now;
  for (const auto& row : rows_) {
    const Letter l = active != nullptr ? letter(row.matching, *active) : 0;
    for (const auto& c : row.configs) {
      frame.rows.push_back({row.matching, c.state,
                            std::vector<Timepoint>(c.clocks.last_reset.begin(),
                                                   c.clocks.last_reset.end()),
                            l});
    }
  }
  frame.dropped = std::move(dropped);
  frame.caught_up = std::move(caught_up);
  opts_.trace(frame);
}

}  // namespace detail

EngineResult run_baseline(const TemporalGraph& g, const Bgp& p, const TimedAutomaton& ta,
                          const EngineOptions& opts) {
  detail::StatesTable table(g, p, ta, opts);
  auto matchings = match_total(g, p, opts.match);
  table.counters().matchings_generated = matchings.size();

  // Deferred matchings join the table at the rank where one of their edges is
  // first active (rank 0: never active, they stay in the initial state).
  const auto domain = g.domain();
  const bool defer = opts.first_seen && ta.dead_start();
  std::vector<std::vector<Matching>> arrivals(domain.size() + 1);
  for (auto& m : matchings) {
    std::size_t rank = 1;
    if (defer) {
      rank = 0;
      for (const auto e : m.edges) {
        const auto r = g.first_seen_rank(e);
        if (r != 0 && (rank == 0 || r < rank)) rank = r;
      }
    }
    arrivals[std::min(rank, arrivals.size() - 1)].push_back(std::move(m));
  }
  const auto initial = ta.initial_configuration();
  auto admit = [&](std::vector<Matching>& ms) {
    for (auto& m : ms) table.rows().push_back({std::move(m), {initial}});
    ms.clear();
  };
  if (!defer || domain.empty()) admit(arrivals[domain.empty() ? 0 : 1]);
  table.emit_frame(0, 0, nullptr, {}, {});

  std::vector<char> active(g.num_edges(), 0);
  for (std::size_t i = 1; i <= domain.size(); ++i) {
    admit(arrivals[i]);
    const auto snap = g.snapshot_at_rank(i);
    mark(active, snap, 1);
    std::vector<TraceDrop> dropped;
    table.step_all(i, domain[i - 1], active, opts.trace ? &dropped : nullptr);
    table.emit_frame(i, domain[i - 1], &active, std::move(dropped), {});
    mark(active, snap, 0);
  }
  if (defer) admit(arrivals[0]);
  return table.finish(domain.empty() ? 0 : domain.back());
}

OnDemandRun::OnDemandRun(const TemporalGraph& g, const Bgp& p, const TimedAutomaton& ta,
                         EngineOptions opts)
    : g_(g),
      p_(p),
      opts_(std::move(opts)),
      join_(g, p, opts_.match),
      table_(g, p, ta, opts_),
      seen_(g.num_edges(), 0),
      active_(g.num_edges(), 0) {
  table_.emit_frame(0, 0, nullptr, {}, {});
}

void OnDemandRun::advance(Timepoint t, std::span<const EdgeIndex> snapshot) {
  if (!times_.empty() && t <= times_.back()) {
    throw std::invalid_argument("snapshots must arrive in increasing time order");
  }
  std::vector<EdgeIndex> fresh;
  for (const auto e : snapshot) {
    if (!seen_[e]) fresh.push_back(e);
  }
  std::vector<char> fresh_mask(g_.num_edges(), 0);
  mark(fresh_mask, fresh, 1);

  std::vector<Matching> found;
  join_.delta(seen_, history_, fresh_mask, fresh, [&](const Matching& m) { found.push_back(m); });
  sort_by_ids(g_, found);
  table_.counters().matchings_generated += found.size();

  std::vector<TraceCatchUp> caught_up;
  for (auto& m : found) {
    std::vector<Configuration> configs;
    std::optional<Timepoint> died_at;
    const bool alive = table_.replay(m, times_, t, configs, died_at);
    if (opts_.trace) caught_up.push_back({m, died_at});
    if (alive) table_.rows().push_back({std::move(m), std::move(configs)});
  }

  mark(seen_, fresh, 1);
  history_.insert(history_.end(), fresh.begin(), fresh.end());
  times_.push_back(t);

  mark(active_, snapshot, 1);
  std::vector<TraceDrop> dropped;
  table_.step_all(times_.size(), t, active_, opts_.trace ? &dropped : nullptr);
  table_.emit_frame(times_.size(), t, &active_, std::move(dropped), std::move(caught_up));
  mark(active_, snapshot, 0);
}

EngineResult OnDemandRun::finish() {
  // Matchings over edges that were never active exist only once the stream
  // has ended; their words are replayed in full.
  std::vector<EdgeIndex> never;
  for (EdgeIndex e = 0; e < static_cast<EdgeIndex>(g_.num_edges()); ++e) {
    if (!seen_[e]) never.push_back(e);
  }
  std::vector<char> never_mask(g_.num_edges(), 0);
  mark(never_mask, never, 1);
  const Timepoint end = times_.empty() ? 0 : times_.back();
  std::vector<Matching> found;
  join_.delta(seen_, history_, never_mask, never, [&](const Matching& m) { found.push_back(m); });
  table_.counters().matchings_generated += found.size();
  for (auto& m : found) {
    std::vector<Configuration> configs;
    std::optional<Timepoint> died_at;
    if (table_.replay(m, times_, end, configs, died_at)) {
      table_.rows().push_back({std::move(m), std::move(configs)});
    }
  }
  return table_.finish(end);
}

PartialMatchRun::PartialMatchRun(const TemporalGraph& g, const Bgp& p, const TimedAutomaton& ta,
                                 EngineOptions opts)
    : g_(g),
      p_(p),
      opts_(std::move(opts)),
      join_(g, p, opts_.match),
      table_(g, p, ta, opts_),
      seen_(g.num_edges(), 0),
      active_(g.num_edges(), 0) {
  if (opts_.order) {
    if (opts_.order->size() != p.width()) {
      throw EngineError(EngineError::Kind::OrderNotConnected,
                        "order must list every edge variable once");
    }
    if (!is_connected_order(p, *opts_.order)) {
      throw EngineError(EngineError::Kind::OrderNotConnected,
                        "order " + format_order(p, *opts_.order) + " is not connected");
    }
    const auto c = is_compatible_order(ta, *opts_.order);
    if (c == Compatibility::Incompatible) {
      throw EngineError(EngineError::Kind::OrderIncompatible,
                        "order " + format_order(p, *opts_.order) +
                            " is incompatible with the automaton");
    }
    if (c == Compatibility::Unknown) table_.counters().order_unknown = 1;
  }
  table_.rows().push_back({Matching::empty(p), {ta.initial_configuration()}});
  table_.counters().matchings_generated = 1;
  table_.emit_frame(0, 0, nullptr, {}, {});
}

void PartialMatchRun::advance(Timepoint t, std::span<const EdgeIndex> snapshot) {
  if (!times_.empty() && t <= times_.back()) {
    throw std::invalid_argument("snapshots must arrive in increasing time order");
  }
  std::vector<EdgeIndex> fresh;
  for (const auto e : snapshot) {
    if (!seen_[e]) fresh.push_back(e);
  }
  if (!fresh.empty()) {
    std::vector<char> fresh_mask(g_.num_edges(), 0);
    mark(fresh_mask, fresh, 1);
    const std::vector<int>* order = opts_.order ? &*opts_.order : nullptr;
    auto& rows = table_.rows();
    const std::size_t existing = rows.size();
    std::vector<detail::StateEntry> added;
    for (std::size_t r = 0; r < existing; ++r) {
      join_.extensions(rows[r].matching, fresh_mask, fresh, order,
                       [&](const Matching& m) { added.push_back({m, rows[r].configs}); });
    }
    table_.counters().matchings_generated += added.size();
    for (auto& a : added) rows.push_back(std::move(a));
  }
  mark(seen_, fresh, 1);
  history_.insert(history_.end(), fresh.begin(), fresh.end());
  times_.push_back(t);

  mark(active_, snapshot, 1);
  std::vector<TraceDrop> dropped;
  table_.step_all(times_.size(), t, active_, opts_.trace ? &dropped : nullptr);
  table_.emit_frame(times_.size(), t, &active_, std::move(dropped), {});
  mark(active_, snapshot, 0);
}

EngineResult PartialMatchRun::finish() {
  std::vector<EdgeIndex> never;
  for (EdgeIndex e = 0; e < static_cast<EdgeIndex>(g_.num_edges()); ++e) {
    if (!seen_[e]) never.push_back(e);
  }
  const Timepoint end = times_.empty() ? 0 : times_.back();
  if (!never.empty()) {
    std::vector<char> never_mask(g_.num_edges(), 0);
    mark(never_mask, never, 1);
    std::vector<Matching> found;
    join_.delta(seen_, history_, never_mask, never,
                [&](const Matching& m) { found.push_back(m); });
    table_.counters().matchings_generated += found.size();
    for (auto& m : found) {
      std::vector<Configuration> configs;
      std::optional<Timepoint> died_at;
      if (table_.replay(m, times_, end, configs, died_at)) {
        table_.rows().push_back({std::move(m), std::move(configs)});
      }
    }
  }
  return table_.finish(end);
}

namespace {

template <typename Run>
EngineResult stream(const TemporalGraph& g, const Bgp& p, const TimedAutomaton& ta,
                    const EngineOptions& opts) {
  Run run(g, p, ta, opts);
  const auto domain = g.domain();
  for (std::size_t i = 1; i <= domain.size(); ++i) run.advance(domain[i - 1], g.snapshot_at_rank(i));
  return run.finish();
}

}  // namespace

EngineResult run_on_demand(const TemporalGraph& g, const Bgp& p, const TimedAutomaton& ta,
                           const EngineOptions& opts) {
  return stream<OnDemandRun>(g, p, ta, opts);
}

EngineResult run_partial_match(const TemporalGraph& g, const Bgp& p, const TimedAutomaton& ta,
                               const EngineOptions& opts) {
  return stream<PartialMatchRun>(g, p, ta, opts);
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  if (name == "baseline") return Algorithm::Baseline;
  if (name == "on-demand") return Algorithm::OnDemand;
  if (name == "partial") return Algorithm::Partial;
  return std::nullopt;
}

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Baseline: return "baseline";
    case Algorithm::OnDemand: return "on-demand";
    case Algorithm::Partial: return "partial";
  }
  return "?";
}

EngineResult run(Algorithm a, const TemporalGraph& g, const Bgp& p, const TimedAutomaton& ta,
                 const EngineOptions& opts) {
  switch (a) {
    case Algorithm::Baseline: return run_baseline(g, p, ta, opts);
    case Algorithm::OnDemand: return run_on_demand(g, p, ta, opts);
    case Algorithm::Partial: return run_partial_match(g, p, ta, opts);
  }
  return {};
}

}  // namespace tempo
