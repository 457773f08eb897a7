#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "commex/graph.hpp"

namespace commex {

/// Stochastic block model. Labels are drawn i.i.d. from `pi`, or fixed by `sizes`
/// when given (the first sizes[0] nodes are block 0, and so on). Edges form
/// independently with probability rho * p[a][b].
struct BlockModelParams {
  std::size_t n = 0;
  std::vector<double> pi;
  std::vector<std::vector<double>> p;
  double rho = 1.0;
  std::optional<std::vector<std::size_t>> sizes;

  std::size_t blocks() const noexcept { return p.size(); }
  /// Expected degree scale lambda_n = n rho.
  double expected_degree_scale() const noexcept { return static_cast<double>(n) * rho; }
};

/// Throws DomainError unless P is square and symmetric, every rho * p_ab lies in
/// [0, 1], pi sums to 1 (within 1e-12) and sizes, if present, sum to n.
void validate(const BlockModelParams& params);

struct SampledNetwork {
  Graph graph;
  std::vector<std::size_t> labels;
};

SampledNetwork sample_block_model(const BlockModelParams& params, std::uint64_t seed);

/// Two-block edge probabilities: p11 inside the community, p12 across, p22 outside.
struct TwoBlock {
  double p11 = 0.0;
  double p12 = 0.0;
  double p22 = 0.0;
};

/// p11 > p12, p11 > p22 and p11 + p22 > 2 p12.
bool check_consistency_conditions(const TwoBlock& p);

/// Whether (t1, t2) lies in [0, pi] x [0, 1 - pi] or [pi, 1] x [1 - pi, 1].
bool in_population_region(double t1, double t2, double pi);

/// Large-n limit of the original criterion in terms of t1 (purity of S) and t2
/// (purity of its complement). Without `pi`, (t1, t2) is only checked to lie in
/// the unit square.
double population_original(double t1, double t2, const TwoBlock& p,
                           std::optional<double> pi = std::nullopt);

/// Large-n limit of the adjusted criterion. Throws DomainError off the region and
/// when t1 + t2 = 1.
double population_adjusted(double t1, double t2, double pi, const TwoBlock& p);

struct StationaryPoint {
  double t1 = 0.0;
  double t2 = 0.0;
};

/// The only interior candidate for a zero gradient of the adjusted surface. Throws
/// DomainError when p11 + p22 = 2 p12.
StationaryPoint interior_stationary_point(const TwoBlock& p);

enum class PopulationCriterion { original, adjusted };

struct GridArgmax {
  double t1 = 0.0;
  double t2 = 0.0;
  double value = 0.0;
  /// check_consistency_conditions held for the parameters.
  bool consistent = false;
  /// More than one grid point attains the maximum.
  bool degenerate = false;
  std::size_t points = 0;
};

/// Maximizes a population criterion over the grid {0, step, 2 step, ..., 1}^2
/// restricted to the feasible region. For the adjusted criterion points with
/// |t1 + t2 - 1| < step/2 are skipped. Requires 0 < step <= 0.1.
GridArgmax population_grid_argmax(PopulationCriterion criterion, double pi, const TwoBlock& p,
                                  double step = 0.01);

}  // namespace commex
