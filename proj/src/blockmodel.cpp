#include "commex/blockmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "commex/error.hpp"

namespace commex {

void validate(const BlockModelParams& params) {
  const std::size_t k = params.p.size();
  if (k == 0) throw DomainError("block model needs at least one block");
  if (!(params.rho >= 0.0)) throw DomainError("sparsity factor must be nonnegative");
  for (std::size_t a = 0; a < k; ++a) {
    if (params.p[a].size() != k) throw DomainError("probability matrix is not square");
    for (std::size_t b = 0; b < k; ++b) {
      const double q = params.rho * params.p[a][b];
      if (!(q >= 0.0 && q <= 1.0)) {
        throw DomainError("scaled edge probability p[" + std::to_string(a) + "][" +
                          std::to_string(b) + "] outside [0, 1]");
      }
      if (params.p[a][b] != params.p[b][a]) throw DomainError("probability matrix not symmetric");
    }
  }
  if (params.sizes) {
    if (params.sizes->size() != k) throw DomainError("one block size per block required");
    if (std::accumulate(params.sizes->begin(), params.sizes->end(), std::size_t{0}) != params.n) {
      throw DomainError("block sizes must sum to n");
    }
  } else {
    if (params.pi.size() != k) throw DomainError("one block probability per block required");
    double sum = 0.0;
    for (double x : params.pi) {
      if (!(x >= 0.0 && x <= 1.0)) throw DomainError("block probability outside [0, 1]");
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw DomainError("block probabilities must sum to 1");
  }
}

SampledNetwork sample_block_model(const BlockModelParams& params, std::uint64_t seed) {
  validate(params);
  std::mt19937_64 rng(seed);
  SampledNetwork out;
  out.labels.reserve(params.n);
  if (params.sizes) {
    for (std::size_t a = 0; a < params.sizes->size(); ++a)
      out.labels.insert(out.labels.end(), (*params.sizes)[a], a);
  } else {
    std::discrete_distribution<std::size_t> block(params.pi.begin(), params.pi.end());
    for (std::size_t i = 0; i < params.n; ++i) out.labels.push_back(block(rng));
  }

  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<EdgeRecord> edges;
  for (NodeId i = 0; i < params.n; ++i) {
    const auto& row = params.p[out.labels[i]];
    for (NodeId j = i + 1; j < params.n; ++j) {
      if (uniform(rng) < params.rho * row[out.labels[j]]) edges.push_back({i, j, 1.0});
    }
  }
  out.graph = Graph::from_edges(params.n, edges);
  return out;
}

bool check_consistency_conditions(const TwoBlock& p) {
  return p.p11 > p.p12 && p.p11 > p.p22 && p.p11 + p.p22 > 2.0 * p.p12;
}

bool in_population_region(double t1, double t2, double pi) {
  constexpr double eps = 1e-12;
  auto within = [](double x, double lo, double hi) { return x >= lo - eps && x <= hi + eps; };
  return (within(t1, 0.0, pi) && within(t2, 0.0, 1.0 - pi)) ||
         (within(t1, pi, 1.0) && within(t2, 1.0 - pi, 1.0));
}

namespace {

double original_surface(double t1, double t2, const TwoBlock& p) {
  const double curvature = p.p11 - 2.0 * p.p12 + p.p22;
  const double g = t1 * (t1 + t2 - 1.0) - 0.5 * (t1 + t2);
  return p.p22 - p.p12 + curvature * g + 0.5 * (p.p11 - p.p22) * (t1 + t2);
}

}  // namespace

double population_original(double t1, double t2, const TwoBlock& p, std::optional<double> pi) {
  if (pi) {
    if (!in_population_region(t1, t2, *pi)) throw DomainError("(t1, t2) outside the feasible region");
  } else if (!(t1 >= 0.0 && t1 <= 1.0 && t2 >= 0.0 && t2 <= 1.0)) {
    throw DomainError("(t1, t2) outside the unit square");
  }
  return original_surface(t1, t2, p);
}

double population_adjusted(double t1, double t2, double pi, const TwoBlock& p) {
  if (!in_population_region(t1, t2, pi)) throw DomainError("(t1, t2) outside the feasible region");
  const double sum = t1 + t2 - 1.0;
  if (sum == 0.0) throw DomainError("adjusted population criterion is singular on t1 + t2 = 1");
  // (t1 - pi)(t2 - (1 - pi)) / (t1 + t2 - 1)^2 is the product of the two side fractions.
  return (t1 - pi) * (t2 - (1.0 - pi)) / (sum * sum) * original_surface(t1, t2, p);
}

StationaryPoint interior_stationary_point(const TwoBlock& p) {
  const double denom = p.p11 + p.p22 - 2.0 * p.p12;
  if (denom == 0.0) throw DomainError("degenerate parameters: p11 + p22 = 2 p12");
  return {(p.p22 - p.p12) / denom, (p.p11 - p.p12) / denom};
}

GridArgmax population_grid_argmax(PopulationCriterion criterion, double pi, const TwoBlock& p,
                                  double step) {
  if (!(step > 0.0 && step <= 0.1)) throw DomainError("grid step must lie in (0, 0.1]");
  if (!(pi > 0.0 && pi < 1.0)) throw DomainError("pi must lie in (0, 1)");

  const auto count = static_cast<std::size_t>(std::ceil(1.0 / step - 1e-9));
  std::vector<double> axis;
  for (std::size_t i = 0; i <= count; ++i) axis.push_back(std::min(1.0, static_cast<double>(i) * step));

  GridArgmax best;
  best.consistent = check_consistency_conditions(p);
  best.value = -std::numeric_limits<double>::infinity();
  std::vector<double> values;
  for (double t1 : axis) {
    for (double t2 : axis) {
      if (!in_population_region(t1, t2, pi)) continue;
      double v = 0.0;
      if (criterion == PopulationCriterion::original) {
        v = original_surface(t1, t2, p);
      } else {
        if (std::abs(t1 + t2 - 1.0) < step / 2.0) continue;
        v = population_adjusted(t1, t2, pi, p);
      }
      values.push_back(v);
      if (v > best.value) {
        best.value = v;
        best.t1 = t1;
        best.t2 = t2;
      }
    }
  }
  best.points = values.size();
  const double tie = 1e-12 * std::max(1.0, std::abs(best.value));
  best.degenerate =
      std::count_if(values.begin(), values.end(), [&](double v) { return v >= best.value - tie; }) > 1;
  return best;
}

}  // namespace commex
