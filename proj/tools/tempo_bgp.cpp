// SPDX-License-Identifier: Apache-2.0
// tempo-bgp: command-line front end for the temporal pattern engine.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "tempo/engine.hpp"
#include "tempo/oracle.hpp"
#include "tempo/ordering.hpp"
#include "tempo/workbench.hpp"

namespace {

using namespace tempo;
using Clock = std::chrono::steady_clock;

enum Exit { kOk = 0, kInputError = 1, kRefused = 2, kGuard = 3, kDisagree = 4 };

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Inputs {
  std::string graph;
  std::string bgp;
  std::string ta;
};

struct Loaded {
  TemporalGraph g;
  Bgp p;
  std::optional<TimedAutomaton> ta;
};

Loaded load(const Inputs& in) {
  Loaded l;
  l.g = TemporalGraph::load(in.graph);
  l.p = Bgp::load(in.bgp);
  l.ta.emplace(TimedAutomaton::load(in.ta, l.p.width()));
  return l;
}

void add_inputs(CLI::App* cmd, Inputs& in) {
  cmd->add_option("--graph", in.graph, "directory with node.csv, edge.csv, active.csv")->required();
  cmd->add_option("--bgp", in.bgp, "pattern file")->required();
  cmd->add_option("--ta", in.ta, "automaton file")->required();
}

int cmd_match(const Inputs& in, const std::string& algo_name, const std::string& order,
              const std::string& out_path, bool distinct, bool no_early, bool no_first_seen) {
  const auto algo = parse_algorithm(algo_name);
  if (!algo) throw CLI::ValidationError("--algo", "expected baseline, on-demand or partial");
  auto l = load(in);
  EngineOptions opts;
  opts.match.distinct_edges = distinct;
  opts.early_accept = opts.early_reject = !no_early;
  opts.first_seen = !no_first_seen;
  if (!order.empty()) opts.order = parse_order(l.p, order);

  const auto start = Clock::now();
  const auto result = run(*algo, l.g, l.p, *l.ta, opts);
  const auto wall = static_cast<long long>(ms_since(start));

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw Error("cannot write " + out_path);
  }
  std::ostream& out = out_path.empty() ? std::cout : file;
  for (const auto& a : result.accepted) out << format_accept(l.g, l.p, a) << '\n';
  out << format_stats(result.counters, wall) << '\n';
  if (result.counters.order_unknown) {
    std::cerr << "warning: order compatibility is unknown for a clocked automaton\n";
  }
  return kOk;
}

// Compares the three engines and the oracle on one instance; prints a diff.
bool agree(const TemporalGraph& g, const Bgp& p, const TimedAutomaton& ta, bool distinct,
           std::ostream& report) {
  EngineOptions opts;
  opts.match.distinct_edges = distinct;
  const auto expected = oracle::evaluate(g, p, ta, distinct);
  bool same = true;
  for (const auto algo : {Algorithm::Baseline, Algorithm::OnDemand, Algorithm::Partial}) {
    const auto got = run(algo, g, p, ta, opts).matchings();
    if (got == expected) continue;
    same = false;
    report << to_string(algo) << " disagrees with the oracle:\n";
    for (const auto& m : expected) {
      if (std::find(got.begin(), got.end(), m) == got.end()) {
        report << "  missing " << format_matching(g, p, m) << '\n';
      }
    }
    for (const auto& m : got) {
      if (std::find(expected.begin(), expected.end(), m) == expected.end()) {
        report << "  extra   " << format_matching(g, p, m) << '\n';
      }
    }
  }
  return same;
}

int cmd_verify(const Inputs& in, bool distinct, int seeds) {
  if (seeds > 0) {
    const auto p = Bgp::load(in.bgp);
    const auto ta = TimedAutomaton::load(in.ta, p.width());
    int failed = 0;
    for (int s = 0; s < seeds; ++s) {
      const auto g = random_instance(static_cast<std::uint64_t>(s));
      std::ostringstream report;
      if (!agree(g, p, ta, distinct, report)) {
        ++failed;
        std::cout << "seed " << s << ":\n" << report.str();
      }
    }
    std::cout << (failed == 0 ? "AGREE" : "DISAGREE") << " instances=" << seeds
              << " failed=" << failed << '\n';
    return failed == 0 ? kOk : kDisagree;
  }
  if (in.graph.empty()) throw CLI::ValidationError("--graph", "required unless --seeds is given");
  auto l = load(in);
  const bool same = agree(l.g, l.p, *l.ta, distinct, std::cout);
  std::cout << (same ? "AGREE" : "DISAGREE") << '\n';
  return same ? kOk : kDisagree;
}

int cmd_check_order(const std::string& bgp, const std::string& ta_path, const std::string& order,
                    bool search) {
  const auto p = Bgp::load(bgp);
  const auto ta = TimedAutomaton::load(ta_path, p.width());
  if (search) {
    const auto found = search_order(p, ta);
    std::cout << (found ? format_order(p, *found) : std::string("NO")) << '\n';
    return kOk;
  }
  if (order.empty()) throw CLI::ValidationError("--order", "required unless --search is given");
  const auto o = parse_order(p, order);
  std::cout << "connected=" << (is_connected_order(p, o) ? "true" : "false")
            << " compatible=" << to_string(is_compatible_order(ta, o)) << '\n';
  return kOk;
}

int cmd_bench(const Inputs& in, const std::string& algos, int repeat, int unfolds,
              int extra_clocks, const std::string& order, bool no_first_seen) {
  const auto load_start = Clock::now();
  auto l = load(in);
  TimedAutomaton ta = *l.ta;
  for (int i = 0; i < unfolds; ++i) ta = unfold(ta);
  if (extra_clocks > 0) ta = add_reset_clocks(ta, extra_clocks);
  const double load_ms = ms_since(load_start);

  std::vector<Algorithm> selected;
  std::stringstream ss(algos);
  for (std::string name; std::getline(ss, name, ',');) {
    const auto a = parse_algorithm(name);
    if (!a) throw CLI::ValidationError("--algos", "unknown algorithm '" + name + "'");
    selected.push_back(*a);
  }
  EngineOptions opts;
  opts.first_seen = !no_first_seen;
  std::cout << "algo\tstates\tclocks\tload_ms\trun_ms_mean\trun_ms_min\taccepted\trows"
               "\tgenerated\tearly_rejected\tearly_accepted\n";
  for (const auto algo : selected) {
    EngineOptions o = opts;
    if (algo == Algorithm::Partial && !order.empty()) o.order = parse_order(l.p, order);
    std::vector<double> times;
    EngineResult last;
    for (int r = 0; r < repeat; ++r) {
      const auto start = Clock::now();
      last = run(algo, l.g, l.p, ta, o);
      times.push_back(ms_since(start));
    }
    const double mean = std::accumulate(times.begin(), times.end(), 0.0) / times.size();
    const double best = *std::min_element(times.begin(), times.end());
    const auto& c = last.counters;
    std::printf("%s\t%d\t%d\t%.3f\t%.3f\t%.3f\t%zu\t%llu\t%llu\t%llu\t%llu\n",
                std::string(to_string(algo)).c_str(), ta.num_states(), ta.num_clocks(), load_ms,
                mean, best, last.accepted.size(),
                static_cast<unsigned long long>(c.rows_processed),
                static_cast<unsigned long long>(c.matchings_generated),
                static_cast<unsigned long long>(c.early_rejected),
                static_cast<unsigned long long>(c.early_accepted));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal graph pattern matching with timed automata"};
  app.require_subcommand(1);

  Inputs in;
  std::string algo = "baseline";
  std::string order;
  std::string out;
  bool distinct = false;
  bool no_early = false;
  bool no_first_seen = false;

  auto* match = app.add_subcommand("match", "evaluate a temporal pattern");
  add_inputs(match, in);
  match->add_option("--algo", algo, "baseline | on-demand | partial");
  match->add_option("--order", order, "edge-variable order for partial, e.g. y1,y2,y3");
  match->add_option("--out", out, "write results to a file instead of stdout");
  match->add_flag("--distinct-edges", distinct, "edge variables bind distinct edges");
  match->add_flag("--no-early", no_early, "disable early accept/reject");
  match->add_flag("--no-first-seen", no_first_seen, "disable first-seen deferral");

  GenSpec spec;
  auto* gen = app.add_subcommand("gen", "generate a synthetic temporal graph");
  gen->add_option("--nodes", spec.n_nodes)->check(CLI::Range(2, 1000000));
  gen->add_option("--struct", spec.struct_density)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--temp", spec.temp_density)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--snapshots", spec.n_snapshots)->check(CLI::PositiveNumber);
  gen->add_option("--seed", spec.seed);
  gen->add_option("--out", out, "output directory")->required();

  int factor = 1;
  auto* coarse = app.add_subcommand("coarsen", "reduce temporal resolution");
  coarse->add_option("--graph", in.graph)->required();
  coarse->add_option("--factor", factor)->required()->check(CLI::PositiveNumber);
  coarse->add_option("--out", out, "output directory")->required();

  bool search = false;
  auto* check = app.add_subcommand("check-order", "check an edge-variable order");
  check->add_option("--bgp", in.bgp)->required();
  check->add_option("--ta", in.ta)->required();
  check->add_option("--order", order);
  check->add_flag("--search", search, "try every order and print the first valid one");

  int seeds = 0;
  auto* verify = app.add_subcommand("verify", "compare all engines against the oracle");
  verify->add_option("--graph", in.graph);
  verify->add_option("--bgp", in.bgp)->required();
  verify->add_option("--ta", in.ta)->required();
  verify->add_option("--seeds", seeds, "use random instances for seeds 0..N-1 instead of --graph");
  verify->add_flag("--distinct-edges", distinct);

  std::string algos = "baseline,on-demand,partial";
  int repeat = 3;
  int unfolds = 0;
  int extra_clocks = 0;
  auto* bench = app.add_subcommand("bench", "time the engines");
  add_inputs(bench, in);
  bench->add_option("--algos", algos, "comma-separated algorithms");
  bench->add_option("--repeat", repeat)->check(CLI::PositiveNumber);
  bench->add_option("--unfold", unfolds, "double the automaton this many times");
  bench->add_option("--extra-clocks", extra_clocks, "add always-reset clocks");
  bench->add_option("--order", order, "order for the partial engine");
  bench->add_flag("--no-first-seen", no_first_seen);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*match) return cmd_match(in, algo, order, out, distinct, no_early, no_first_seen);
    if (*gen) {
      spec.validate();
      write_graph(generate(spec), out);
      return kOk;
    }
    if (*coarse) {
      write_graph(coarsen(TemporalGraph::load(in.graph), factor), out);
      return kOk;
    }
    if (*check) return cmd_check_order(in.bgp, in.ta, order, search);
    if (*verify) return cmd_verify(in, distinct, seeds);
    if (*bench) {
      return cmd_bench(in, algos, repeat, unfolds, extra_clocks, order, no_first_seen);
    }
  } catch (const EngineError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kRefused;
  } catch (const oracle::GuardError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kGuard;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}
