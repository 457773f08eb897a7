#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "commex/graph.hpp"

namespace commex {

/// Dense row-major matrix, just enough for confusion and block-count tables.
struct Table {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Table() = default;
  Table(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// R_ab = (1/n) #{i : s_i = a, c_i = b}; rows index proposed labels, columns true labels.
Table confusion_matrix(std::span<const std::size_t> proposed, std::span<const std::size_t> truth);

/// O_kl = sum of A_ij over ordered pairs with s_i = k and s_j = l, so O_kk is twice
/// the within-block weight and the entries sum to 2m.
Table block_edge_counts(const Graph& g, std::span<const std::size_t> proposed);

struct MatchScore {
  double ppv = 0.0;
  double npv = 0.0;
  std::size_t matched_class = 0;
  /// The matched class is the designated background class.
  bool matched_background = false;
};

/// Scores an extracted set S against ground truth. C_S is the true class holding the
/// plurality of S (ties to the lowest class id); PPV = |C_S n S| / |S| and
/// NPV = 1 - |C_S n S^c| / |S^c|. Throws InfeasibleError if S or S^c is empty.
MatchScore match_and_score(std::span<const NodeId> extracted,
                           std::span<const std::size_t> true_labels,
                           std::optional<std::size_t> background_label = std::nullopt);

}  // namespace commex
