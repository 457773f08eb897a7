// commex: command-line front end for community extraction, modularity partitions
// and block-model simulations.
//
// Exit codes: 0 success, 1 input error, 2 convergence or infeasibility error.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commex/blockmodel.hpp"
#include "commex/error.hpp"
#include "commex/evaluation.hpp"
#include "commex/graph.hpp"
#include "commex/harness.hpp"
#include "commex/partition.hpp"
#include "commex/pipeline.hpp"

namespace {

using namespace commex;

constexpr int kInputError = 1;
constexpr int kSearchError = 2;

struct InputOptions {
  std::string edges;
  bool directed = false;
};

LoadedGraph load(const InputOptions& in) {
  LoadedGraph lg = load_edge_list_file(
      in.edges, in.directed ? DirectedMode::average_directed : DirectedMode::undirected);
  if (lg.dropped_self_loops > 0)
    std::cerr << "note: dropped " << lg.dropped_self_loops << " self-loop record(s)\n";
  return lg;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'", 0);
  return out;
}

struct ExtractOptions {
  InputOptions input;
  std::string criterion = "adjusted";
  std::size_t min_size = 5;
  std::optional<std::size_t> max_communities;
  std::size_t restarts = 10;
  std::uint64_t seed = TabuConfig{}.seed;
  std::size_t threads = 1;
  std::string json;
};

int run_extract(const ExtractOptions& o) {
  const Criterion c = parse_criterion(o.criterion);
  if (c == Criterion::modularity2) throw DomainError("extract supports original|adjusted");
  const Graph g = load(o.input).graph;
  TabuConfig cfg;
  cfg.restarts = o.restarts;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  const ExtractionResult res = extract_sequence(g, c, cfg, StopRule{o.min_size, o.max_communities});

  if (o.json.empty()) {
    write_extraction_json(std::cout, g, res);
    return 0;
  }
  auto out = open_output(o.json);
  write_extraction_json(out, g, res);
  std::cout << "criterion " << to_string(c) << ", " << res.communities.size()
            << " communities, " << res.background.size() << " background nodes\n";
  for (const auto& com : res.communities)
    std::cout << "  #" << com.rank << "  size " << com.members.size() << "  score "
              << std::setprecision(6) << com.score << '\n';
  return 0;
}

struct PartitionOptions {
  InputOptions input;
  std::optional<std::size_t> max_k;
  std::string eigvec;
  std::size_t restarts = 10;
  std::uint64_t seed = TabuConfig{}.seed;
};

int run_partition(const PartitionOptions& o) {
  const Graph g = load(o.input).graph;
  if (!o.eigvec.empty()) {
    const SpectralSplit split = leading_eigenvector_split(g);
    auto out = open_output(o.eigvec);
    out << "# leading eigenvalue " << std::setprecision(17) << split.eigval_estimate << " after "
        << split.iterations << " iterations\n";
    for (NodeId i = 0; i < g.size(); ++i) out << g.label(i) << ' ' << split.eigvec[i] << '\n';
  }
  TabuConfig cfg;
  cfg.restarts = o.restarts;
  cfg.seed = o.seed;
  const KWayLabeling part = sequential_modularity_partition(g, cfg, o.max_k);
  std::cout << "# k " << part.k << " modularity " << std::setprecision(10)
            << modularity_score(g, part.assignment) << '\n';
  for (NodeId i = 0; i < g.size(); ++i) std::cout << g.label(i) << ' ' << part.assignment[i] << '\n';
  return 0;
}

struct SimulateOptions {
  std::string scenario;
  std::optional<std::size_t> reps;
  std::string out;
  std::string plot;
  std::size_t threads = 1;
};

int run_simulate(const SimulateOptions& o) {
  Scenario sc = load_scenario_file(o.scenario);
  if (o.reps) {
    if (*o.reps == 0) throw DomainError("reps must be at least 1");
    sc.reps = *o.reps;
  }
  const auto rows = run_scenario(sc, o.threads);
  if (o.out.empty()) {
    write_csv(std::cout, rows);
  } else {
    auto out = open_output(o.out);
    write_csv(out, rows);
  }
  if (!o.plot.empty()) {
    auto svg = open_output(o.plot);
    write_boxplot_svg(svg, rows);
  }
  // Per-method means on stderr so the CSV on stdout stays clean.
  for (Method m : sc.methods) {
    std::vector<double> ppv, npv;
    for (const auto& r : rows)
      if (r.method == m) {
        ppv.push_back(r.ppv);
        npv.push_back(r.npv);
      }
    const Summary sp = summarize(ppv), sn = summarize(npv);
    std::cerr << std::fixed << std::setprecision(3) << sc.id << ' ' << to_string(m) << ": PPV "
              << sp.mean << " (" << sp.sd << "), NPV " << sn.mean << " (" << sn.sd << ")\n";
  }
  return 0;
}

struct ScoreOptions {
  InputOptions input;
  std::string labels;
  std::string result;
  std::string background;
};

int run_score(const ScoreOptions& o) {
  const Graph g = load(o.input).graph;
  const TrueLabels truth = load_labels_file(o.labels, g);
  std::ifstream in(o.result);
  if (!in) throw ParseError("cannot open result file '" + o.result + "'", 0);
  const ExtractionResult res = read_extraction_json(in, g);

  std::optional<std::size_t> bg;
  if (!o.background.empty()) {
    for (std::size_t c = 0; c < truth.class_names.size(); ++c)
      if (truth.class_names[c] == o.background) bg = c;
    if (!bg) throw DomainError("background label '" + o.background + "' not found");
  }
  std::cout << "rank,size,ppv,npv,matched_class\n" << std::setprecision(6);
  for (const auto& com : res.communities) {
    const MatchScore ms = match_and_score(com.members, truth.classes, bg);
    std::cout << com.rank << ',' << com.members.size() << ',' << ms.ppv << ',' << ms.npv << ','
              << truth.class_names[ms.matched_class] << '\n';
  }
  return 0;
}

struct TheoryOptions {
  double p11 = 0.5, p12 = 0.05, p22 = 0.4, pi = 0.1, step = 0.01;
};

int run_verify_theory(const TheoryOptions& o) {
  const TwoBlock p{o.p11, o.p12, o.p22};
  for (double v : {o.p11, o.p12, o.p22})
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("edge probabilities must lie in [0, 1]");
  const bool ok = check_consistency_conditions(p);
  std::cout << std::setprecision(6) << "p11 " << o.p11 << "  p12 " << o.p12 << "  p22 " << o.p22
            << "  pi " << o.pi << "  step " << o.step << '\n'
            << "conditions p11>p12, p11>p22, p11+p22>2p12: " << (ok ? "hold" : "violated") << '\n';
  for (auto crit : {PopulationCriterion::original, PopulationCriterion::adjusted}) {
    const GridArgmax a = population_grid_argmax(crit, o.pi, p, o.step);
    const bool truthful = a.t1 == 1.0 && a.t2 == 1.0 && !a.degenerate;
    std::cout << (crit == PopulationCriterion::original ? "original" : "adjusted")
              << " grid argmax (" << a.t1 << ", " << a.t2 << ") value " << a.value << " over "
              << a.points << " points" << (a.degenerate ? " [tied]" : "")
              << (truthful ? "  -> truthful labeling" : "") << '\n';
  }
  try {
    const StationaryPoint sp = interior_stationary_point(p);
    std::cout << "interior stationary point (" << sp.t1 << ", " << sp.t2 << "), t1+t2-1 = "
              << sp.t1 + sp.t2 - 1.0 << '\n';
  } catch (const DomainError&) {
    std::cout << "interior stationary point undefined (p11 + p22 = 2 p12)\n";
  }
  return 0;
}

void add_input(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("edges", in.edges, "Edge list: 'u v [w]' per line")->required()->check(CLI::ExistingFile);
  cmd->add_flag("--directed", in.directed, "Read records as directed and average both directions");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Community extraction and modularity partitioning"};
  app.require_subcommand(1);

  ExtractOptions ex;
  auto* extract = app.add_subcommand("extract", "Extract communities one at a time");
  add_input(extract, ex.input);
  extract->add_option("--criterion", ex.criterion, "original|adjusted")
      ->check(CLI::IsMember({"original", "adjusted"}))
      ->capture_default_str();
  extract->add_option("--min-size", ex.min_size, "Stop at the first smaller proposal")->capture_default_str();
  extract->add_option("--max-communities", ex.max_communities);
  extract->add_option("--restarts", ex.restarts)->check(CLI::PositiveNumber)->capture_default_str();
  extract->add_option("--seed", ex.seed)->capture_default_str();
  extract->add_option("--threads", ex.threads)->check(CLI::PositiveNumber)->capture_default_str();
  extract->add_option("--json", ex.json, "Write the result JSON here instead of stdout");

  PartitionOptions pa;
  auto* partition = app.add_subcommand("partition", "Sequential two-way modularity partition");
  add_input(partition, pa.input);
  partition->add_option("--max-k", pa.max_k)->check(CLI::PositiveNumber);
  partition->add_option("--eigvec", pa.eigvec, "Write the leading modularity eigenvector here");
  partition->add_option("--restarts", pa.restarts)->check(CLI::PositiveNumber)->capture_default_str();
  partition->add_option("--seed", pa.seed)->capture_default_str();

  SimulateOptions si;
  auto* simulate = app.add_subcommand("simulate", "Run a block-model simulation scenario");
  simulate->add_option("scenario", si.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--reps", si.reps);
  simulate->add_option("--out", si.out, "CSV output (default stdout)");
  simulate->add_option("--plot", si.plot, "SVG box plots of PPV and NPV");
  simulate->add_option("--threads", si.threads)->check(CLI::PositiveNumber)->capture_default_str();

  ScoreOptions sc;
  auto* score = app.add_subcommand("score", "PPV/NPV of extracted communities against true labels");
  add_input(score, sc.input);
  score->add_option("labels", sc.labels, "'node_id true_label' per line")->required()->check(CLI::ExistingFile);
  score->add_option("result", sc.result, "JSON written by extract")->required()->check(CLI::ExistingFile);
  score->add_option("--background", sc.background, "True label of background nodes");

  TheoryOptions th;
  auto* theory = app.add_subcommand("verify-theory", "Population criteria on a two-block model");
  theory->add_option("--p11", th.p11)->capture_default_str();
  theory->add_option("--p12", th.p12)->capture_default_str();
  theory->add_option("--p22", th.p22)->capture_default_str();
  theory->add_option("--pi", th.pi)->capture_default_str();
  theory->add_option("--step", th.step)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*extract) return run_extract(ex);
    if (*partition) return run_partition(pa);
    if (*simulate) return run_simulate(si);
    if (*score) return run_score(sc);
    if (*theory) return run_verify_theory(th);
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSearchError;
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSearchError;
  } catch (const UndefinedScoreError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSearchError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return 0;
}
