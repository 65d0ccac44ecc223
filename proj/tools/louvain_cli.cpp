// Command-line front end: community detection, parameter sweeps, graph
// statistics and synthetic fixture generation.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "comdet/community.hpp"
#include "comdet/fixtures.hpp"
#include "comdet/graph.hpp"
#include "comdet/grid.hpp"
#include "comdet/io.hpp"
#include "comdet/louvain.hpp"
#include "comdet/parallel.hpp"
#include "comdet/report.hpp"

namespace {

using namespace comdet;

constexpr int kExitMalformedInput = 1;
constexpr int kExitBadParameters = 2;
constexpr const char* kThreadsEnv = "COMDET_THREADS";

// Failures caused by user-supplied parameters rather than input data.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunSpec {
  std::string input;
  std::string format;  // empty: guess from extension
  bool no_symmetrize = false;
  double self_loop_weight = 1.0;
  CLI::Option* self_loops_opt = nullptr;

  std::string mode = "async";
  std::size_t threads = 0;
  CLI::Option* threads_opt = nullptr;
  std::size_t chunk_size = 1024;
  double tolerance = 0.01;
  double decline = 10.0;
  double pass_tolerance = 0.0;
  std::size_t max_passes = 20;
  std::size_t max_iterations = 500;

  std::string out_membership;
  std::string out_report;
  std::string report_format = "csv";
  std::uint64_t seed = 42;
};

void add_input_options(CLI::App& cmd, RunSpec& spec) {
  cmd.add_option("--input", spec.input, "Graph file (.mtx or edge list)")->required();
  cmd.add_option("--format", spec.format, "Input format")
      ->check(CLI::IsMember({"mtx", "edgelist"}));
  spec.self_loops_opt =
      cmd.add_option("--add-self-loops", spec.self_loop_weight,
                     "Give every vertex without one a self-loop of weight W (default 1)")
          ->expected(0, 1)
          ->default_str("1");
  cmd.add_flag("--no-symmetrize", spec.no_symmetrize,
               "Input already lists both directions of every edge");
}

void add_run_options(CLI::App& cmd, RunSpec& spec) {
  cmd.add_option("--mode", spec.mode, "Local-moving variant")
      ->check(CLI::IsMember({"async", "sync"}));
  spec.threads_opt = cmd.add_option("--threads", spec.threads,
                                    "Worker threads (parallel engine, async only)");
  cmd.add_option("--chunk-size", spec.chunk_size, "Vertices per parallel work chunk");
  cmd.add_option("--tolerance", spec.tolerance, "Initial local-moving tolerance");
  cmd.add_option("--decline-factor", spec.decline, "Tolerance divisor applied per pass");
  cmd.add_option("--pass-tolerance", spec.pass_tolerance, "Minimum per-pass Q gain");
  cmd.add_option("--max-passes", spec.max_passes, "Pass cap");
  cmd.add_option("--max-iterations", spec.max_iterations, "Iteration cap per pass");
  cmd.add_option("--out-report", spec.out_report, "Report output path");
  cmd.add_option("--report-format", spec.report_format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd.add_option("--seed", spec.seed, "Seed for synthetic inputs");
}

Graph load(const RunSpec& spec) {
  const GraphFormat format = spec.format.empty() ? guess_format(spec.input)
                             : spec.format == "mtx" ? GraphFormat::mtx
                                                    : GraphFormat::edgelist;
  BuildOptions opts;
  opts.symmetrize = !spec.no_symmetrize;
  opts.add_self_loops = spec.self_loops_opt->count() > 0;
  opts.default_weight = spec.self_loop_weight;
  if (opts.add_self_loops && !(opts.default_weight > 0.0))
    throw UsageError("self-loop weight must be > 0");
  return build_graph(read_edges(spec.input, format), opts);
}

// Thread count from --threads, else from the environment; empty means the
// sequential engine.
std::optional<std::size_t> resolve_threads(const RunSpec& spec) {
  if (spec.threads_opt->count() > 0) return spec.threads;
  if (const char* env = std::getenv(kThreadsEnv); env && *env) {
    std::size_t t = 0;
    if (!detail::parse_number(std::string_view(env), t))
      throw UsageError(std::string(kThreadsEnv) + " must be a positive integer");
    return t;
  }
  return std::nullopt;
}

ParallelConfig make_config(const RunSpec& spec) {
  ParallelConfig cfg;
  cfg.tolerance_initial = spec.tolerance;
  cfg.tolerance_decline_factor = spec.decline;
  cfg.pass_tolerance = spec.pass_tolerance;
  cfg.max_passes = spec.max_passes;
  cfg.max_iterations_per_pass = spec.max_iterations;
  cfg.mode = spec.mode == "sync" ? Mode::sync : Mode::async;
  cfg.chunk_size = spec.chunk_size;
  // An explicit --threads with sync mode is an error; the environment
  // default simply does not apply to sync runs.
  const auto threads = resolve_threads(spec);
  if (spec.threads_opt->count() > 0 && cfg.mode == Mode::sync)
    throw UsageError("--threads requires --mode async");
  cfg.threads = threads && cfg.mode == Mode::async ? *threads : 0;
  try {
    static_cast<const Config&>(cfg).validate();
    if (cfg.threads != 0) cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

std::pair<Dendrogram, Report> run(const Graph& g, const ParallelConfig& cfg) {
  if (cfg.threads == 0) return louvain(g, cfg);
  return parallel_louvain(g, cfg);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  return out;
}

int cmd_detect(const RunSpec& spec) {
  const ParallelConfig cfg = make_config(spec);
  const Graph g = load(spec);
  auto [dendrogram, report] = run(g, cfg);
  const Assignment communities = flatten(dendrogram);

  if (!spec.out_membership.empty()) {
    auto out = open_output(spec.out_membership);
    write_membership(out, communities);
  }
  if (!spec.out_report.empty()) {
    auto out = open_output(spec.out_report);
    if (spec.report_format == "json")
      write_report_json(out, report);
    else
      write_report_csv(out, report);
  }
  std::printf("Q=%.4f passes=%zu iterations=%zu communities=%zu time_ms=%.3f\n",
              report.final_q, report.total_passes, report.total_iterations,
              community_count(communities), report.wall_ms);
  if (report.pass_cap_hit) std::fprintf(stderr, "warning: pass cap reached\n");
  return 0;
}

int cmd_sweep(const RunSpec& spec, const std::string& kind, const std::string& grid_text) {
  ParallelConfig cfg = make_config(spec);
  const bool threads_sweep = kind == "threads";
  ToleranceGrid grid{{cfg.tolerance_initial}, {cfg.tolerance_decline_factor}};
  std::vector<std::size_t> thread_list;
  try {
    if (threads_sweep) {
      thread_list = parse_count_grid(grid_text);
      if (cfg.mode != Mode::async)
        throw std::invalid_argument("thread sweep requires --mode async");
    } else {
      (kind == "tolerance" ? grid.initial : grid.decline) = parse_grid(grid_text);
    }
    for (double t : grid.initial)
      for (double d : grid.decline) {
        Config probe = cfg;
        probe.tolerance_initial = t;
        probe.tolerance_decline_factor = d;
        probe.validate();
      }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const Graph g = load(spec);
  std::vector<SweepRow> rows;
  if (threads_sweep) {
    rows = sweep_threads(g, thread_list, cfg);
  } else if (cfg.threads == 0) {
    rows = sweep_tolerance(g, grid, cfg);
  } else {
    for (double initial : grid.initial)
      for (double decline : grid.decline) {
        cfg.tolerance_initial = initial;
        cfg.tolerance_decline_factor = decline;
        rows.push_back({initial, decline, cfg.threads, parallel_louvain(g, cfg).second});
      }
  }

  auto emit = [&](std::ostream& out) {
    if (spec.report_format == "json")
      write_sweep_json(out, rows);
    else
      write_sweep_csv(out, rows);
  };
  if (spec.out_report.empty()) {
    emit(std::cout);
  } else {
    auto out = open_output(spec.out_report);
    emit(out);
  }
  return 0;
}

int cmd_stats(const RunSpec& spec) {
  const GraphStats s = graph_stats(load(spec));
  std::printf("|V|=%zu |E|=%zu Davg=%.2f\n", s.vertices, s.undirected_edges, s.avg_degree);
  return 0;
}

struct GenSpec {
  std::size_t k = 3;
  std::size_t count = 2;
  std::size_t bridges = 0;
  std::size_t n = 64;
  double p = 0.1;
  std::uint64_t seed = 42;
  std::string output;
};

int cmd_gen(const GenSpec& spec, const std::string& kind) {
  EdgeList edges;
  try {
    if (kind == "cliques")
      edges = fixtures::cliques(spec.k, spec.count, spec.bridges);
    else if (kind == "ring-of-cliques")
      edges = fixtures::ring_of_cliques(spec.k, spec.count);
    else
      edges = fixtures::random_graph(spec.n, spec.p, spec.seed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (spec.output.empty()) {
    write_edge_list(std::cout, edges);
  } else {
    auto out = open_output(spec.output);
    write_edge_list(out, edges);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Louvain community detection and benchmark harness"};
  app.require_subcommand(1);

  RunSpec detect_spec;
  auto* detect = app.add_subcommand("detect", "Detect communities in a graph");
  add_input_options(*detect, detect_spec);
  add_run_options(*detect, detect_spec);
  detect->add_option("--out-membership", detect_spec.out_membership,
                     "Membership output path (`vertex community` lines)");

  RunSpec sweep_spec;
  std::string sweep_kind;
  std::string sweep_grid;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  sweep->add_option("kind", sweep_kind, "What to sweep")
      ->required()
      ->check(CLI::IsMember({"tolerance", "decline", "threads"}));
  sweep->add_option("--grid", sweep_grid,
                    "Comma list or start:stop:factor range (defaults: tolerance "
                    "1:1e-12:10, decline 10:1e4:10, threads 2,4,8,12,16,24,32,48)");
  add_input_options(*sweep, sweep_spec);
  add_run_options(*sweep, sweep_spec);

  RunSpec stats_spec;
  auto* stats = app.add_subcommand("stats", "Print vertex/edge counts and average degree");
  add_input_options(*stats, stats_spec);

  GenSpec gen_spec;
  std::string gen_kind;
  auto* gen = app.add_subcommand("gen", "Write a synthetic edge-list fixture");
  gen->add_option("kind", gen_kind, "Fixture family")
      ->required()
      ->check(CLI::IsMember({"cliques", "ring-of-cliques", "random"}));
  gen->add_option("--k", gen_spec.k, "Clique size");
  gen->add_option("--count", gen_spec.count, "Number of cliques");
  gen->add_option("--bridges", gen_spec.bridges, "Bridges between consecutive cliques");
  gen->add_option("--n", gen_spec.n, "Vertices (random)");
  gen->add_option("--p", gen_spec.p, "Edge probability (random)");
  gen->add_option("--seed", gen_spec.seed, "Random seed");
  gen->add_option("--output", gen_spec.output, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadParameters;
  }

  try {
    if (*detect) return cmd_detect(detect_spec);
    if (*sweep) {
      if (sweep_grid.empty())
        sweep_grid = sweep_kind == "tolerance" ? "1:1e-12:10"
                     : sweep_kind == "decline" ? "10:1e4:10"
                                               : "2,4,8,12,16,24,32,48";
      return cmd_sweep(sweep_spec, sweep_kind, sweep_grid);
    }
    if (*stats) return cmd_stats(stats_spec);
    if (*gen) return cmd_gen(gen_spec, gen_kind);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadParameters;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitMalformedInput;
  }
  return 0;
}
