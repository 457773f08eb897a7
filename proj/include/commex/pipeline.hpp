#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "commex/criteria.hpp"
#include "commex/graph.hpp"
#include "commex/tabu.hpp"

namespace commex {

struct Extraction {
  std::vector<NodeId> community;  // sorted node ids of the full graph
  double score = 0.0;
};

struct ExtractedCommunity {
  std::size_t rank = 0;  // 1 = first extracted
  std::vector<NodeId> members;
  double score = 0.0;
};

struct ExtractionResult {
  std::vector<ExtractedCommunity> communities;
  std::vector<NodeId> background;
  Criterion criterion = Criterion::adjusted;
};

struct StopRule {
  /// Proposals with fewer nodes end the sequence and are discarded.
  std::size_t min_size = 5;
  std::optional<std::size_t> max_communities;
};

/// Best community inside `active`, scored on the induced subgraph only: edges to
/// nodes outside `active` play no role. `criterion` must be original or adjusted.
Extraction extract_one(const Graph& g, std::span<const NodeId> active, Criterion criterion,
                       const TabuConfig& cfg);

/// Extracts communities one at a time from the shrinking remainder until a proposal
/// is smaller than stop.min_size, stop.max_communities is reached or fewer than two
/// nodes remain. Round r searches with derive_seed(cfg.seed, r).
ExtractionResult extract_sequence(const Graph& g, Criterion criterion, const TabuConfig& cfg,
                                  const StopRule& stop = {});

/// JSON document with rank, score and member labels per community plus the background.
void write_extraction_json(std::ostream& out, const Graph& g, const ExtractionResult& result);
/// Inverse of write_extraction_json; member labels are resolved against `g`.
ExtractionResult read_extraction_json(std::istream& in, const Graph& g);

}  // namespace commex
