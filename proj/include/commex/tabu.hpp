#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "commex/criteria.hpp"
#include "commex/graph.hpp"

namespace commex {

struct TabuConfig {
  /// Iterations a switched node stays tabu. 0 selects max(5, n/50).
  std::size_t tenure = 0;
  /// Switch iterations per run. 0 selects 50 n.
  std::size_t max_iters = 0;
  std::size_t restarts = 10;
  std::uint64_t seed = 20100401;
  /// Smallest allowed size of S and of its complement.
  std::size_t min_side = 1;
  /// Worker threads used by multi_start; results do not depend on it.
  std::size_t threads = 1;
  bool record_trace = false;
  bool record_moves = false;

  std::size_t tenure_for(std::size_t n) const;
  std::size_t iterations_for(std::size_t n) const;
};

struct SearchResult {
  TwoWayLabeling best_labeling;
  double best_score = 0.0;
  SubsetStats best_stats;
  /// Best-so-far score after each iteration (record_trace only).
  std::vector<double> trace;
  /// Node switched at each iteration (record_moves only).
  std::vector<NodeId> moves;
  /// Index of the multi-start run that produced this result.
  std::size_t run = 0;
};

/// Maximizes `criterion` over two-way labelings by tabu search with label switching.
///
/// Each iteration scans the non-tabu nodes in `order`. The first node whose switch
/// beats the best score seen so far is switched immediately. Otherwise the node
/// giving the largest resulting score (largest increase, or smallest decrease) is
/// switched, ties going to the earliest position in `order`. A switched node stays
/// tabu for `tenure` iterations. Moves that would shrink S or S^c below `min_side`
/// are skipped; if every feasible move is tabu the longest-held tabu node is freed.
/// Returns the best labeling visited.
SearchResult tabu_maximize(const Graph& g, Criterion criterion, const TwoWayLabeling& init,
                           std::span<const NodeId> order, const TabuConfig& cfg);

/// Runs tabu_maximize from `cfg.restarts` random initial labelings and node orders,
/// run r drawing from derive_seed(cfg.seed, r). Returns the best run, ties going to
/// the lowest run index.
SearchResult multi_start(const Graph& g, Criterion criterion, const TabuConfig& cfg);

/// The random initial labeling and node order used by multi_start run `run`.
struct StartPoint {
  TwoWayLabeling init;
  std::vector<NodeId> order;
};
StartPoint random_start(std::size_t n, std::size_t min_side, std::uint64_t seed);

/// Deterministic child seed (splitmix64 mixing of seed and index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

namespace detail {

/// Global modularity gain of splitting one community, evaluated on the subgraph
/// induced by that community. `degrees` are the full-graph degrees of the subgraph
/// nodes and `total` is the full-graph 2m.
struct SplitReference {
  std::vector<double> degrees;
  double total = 0.0;
};

SearchResult tabu_run(const Graph& g, Criterion criterion, const SplitReference* split,
                      const TwoWayLabeling& init, std::span<const NodeId> order,
                      const TabuConfig& cfg);

/// multi_start with optional fixed initial labelings tried before the random runs.
SearchResult multi_start(const Graph& g, Criterion criterion, const SplitReference* split,
                         std::span<const TwoWayLabeling> seeded, const TabuConfig& cfg);

/// Score of a labeling under `criterion` (with the split reference for modularity2).
double evaluate(const Graph& g, Criterion criterion, const SplitReference* split,
                const TwoWayLabeling& s);

}  // namespace detail
}  // namespace commex
