#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "commex/criteria.hpp"
#include "commex/graph.hpp"
#include "commex/tabu.hpp"

namespace commex {

/// Community id in 0..K-1 for every node.
struct KWayLabeling {
  std::vector<std::size_t> assignment;
  std::size_t k = 1;
};

struct SpectralSplit {
  /// Unit-norm leading eigenvector of the modularity matrix, signed so that the
  /// first non-negligible component is positive.
  std::vector<double> eigvec;
  TwoWayLabeling labeling;
  double eigval_estimate = 0.0;
  std::size_t iterations = 0;
};

/// Leading eigenvector of B = A - k k^T / 2m by power iteration on B + sigma I, with
/// sigma the largest absolute row sum of B. B x is applied implicitly as
/// A x - k (k^T x) / 2m. The constant vector (always in the kernel of B) is projected
/// out. Stops once successive iterates differ by less than `tol` in max norm and the
/// residual |B x - lambda x| is below `tol` too. Components with |x_i| < tol go to
/// the positive side.
///
/// Throws UndefinedScoreError on an edgeless graph and ConvergenceError, carrying the
/// last iterate, after `max_iter` iterations.
SpectralSplit leading_eigenvector_split(const Graph& g, double tol = 1e-8,
                                        std::size_t max_iter = 10000);

/// Two-way modularity maximized by tabu search, seeded with the spectral split and
/// cfg.restarts random starts. The trivial one-community labeling (Q = 0) is returned
/// when no split has positive modularity.
SearchResult modularity_two_way(const Graph& g, const TabuConfig& cfg);

/// Greedy divisive modularity partition: every step tries a two-way split of each
/// current community, judged by the gain in global K-way modularity, and commits the
/// largest gain. Stops when no split gains or K reaches max_k.
KWayLabeling sequential_modularity_partition(const Graph& g, const TabuConfig& cfg,
                                             std::optional<std::size_t> max_k = std::nullopt);

}  // namespace commex
