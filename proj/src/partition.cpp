#include "commex/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "commex/error.hpp"

namespace commex {
namespace {

/// y = B x with B = A - k k^T / 2m.
void modularity_multiply(const Graph& g, const std::vector<double>& x, std::vector<double>& y) {
  const auto k = g.degrees();
  const double kx = std::inner_product(k.begin(), k.end(), x.begin(), 0.0);
  const double scale = kx / g.total_weight();
  for (NodeId i = 0; i < g.size(); ++i) {
    auto nb = g.neighbors(i);
    auto ws = g.weights(i);
    double s = 0.0;
    for (std::size_t t = 0; t < nb.size(); ++t) s += ws[t] * x[nb[t]];
    y[i] = s - k[i] * scale;
  }
}

/// Largest absolute row sum of B, in O(m + n).
double gershgorin_shift(const Graph& g) {
  const double total = g.total_weight();
  double shift = 0.0;
  for (NodeId i = 0; i < g.size(); ++i) {
    const double ki = g.degree(i);
    auto nb = g.neighbors(i);
    auto ws = g.weights(i);
    double neighbor_degrees = 0.0;
    double row = 0.0;
    for (std::size_t t = 0; t < nb.size(); ++t) {
      const double null = ki * g.degree(nb[t]) / total;
      neighbor_degrees += g.degree(nb[t]);
      row += std::abs(ws[t] - null);
    }
    row += ki * (total - neighbor_degrees) / total;
    shift = std::max(shift, row);
  }
  return shift;
}

/// Projects out the constant vector and scales to unit norm; returns the norm.
double center_and_normalize(std::vector<double>& x) {
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  for (double& v : x) v -= mean;
  const double norm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
  if (norm > 0.0)
    for (double& v : x) v /= norm;
  return norm;
}

}  // namespace

SpectralSplit leading_eigenvector_split(const Graph& g, double tol, std::size_t max_iter) {
  const std::size_t n = g.size();
  if (g.total_weight() <= 0.0) throw UndefinedScoreError("modularity matrix of an edgeless graph");
  const double shift = gershgorin_shift(g);

  std::vector<double> x(n);
  std::mt19937_64 rng(0x1eadu);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  for (double& v : x) v = uniform(rng);
  center_and_normalize(x);

  SpectralSplit out;
  std::vector<double> bx(n), next(n);
  bool converged = false;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    modularity_multiply(g, x, bx);
    const double lambda = std::inner_product(x.begin(), x.end(), bx.begin(), 0.0);
    double residual = 0.0;
    for (NodeId i = 0; i < n; ++i) {
      residual = std::max(residual, std::abs(bx[i] - lambda * x[i]));
      next[i] = bx[i] + shift * x[i];
    }
    out.iterations = it;
    out.eigval_estimate = lambda;
    // (B + shift I) x vanishing means x already belongs to the eigenvalue -shift,
    // which then spans everything orthogonal to the constant vector (a single edge).
    if (center_and_normalize(next) < tol) {
      converged = residual < tol;
      break;
    }
    double diff = 0.0;
    for (NodeId i = 0; i < n; ++i) diff = std::max(diff, std::abs(next[i] - x[i]));
    if (diff < tol && residual < tol) {
      converged = true;
      break;
    }
    x.swap(next);
  }
  if (!converged) {
    throw ConvergenceError("power iteration did not converge in " + std::to_string(max_iter) +
                               " iterations",
                           x);
  }

  auto lead = std::find_if(x.begin(), x.end(), [&](double v) { return std::abs(v) >= tol; });
  if (lead != x.end() && *lead < 0.0)
    for (double& v : x) v = -v;
  out.labeling = TwoWayLabeling(n);
  for (NodeId i = 0; i < n; ++i) out.labeling.set(i, x[i] > 0.0 || std::abs(x[i]) < tol);
  out.eigvec = std::move(x);
  return out;
}

SearchResult modularity_two_way(const Graph& g, const TabuConfig& cfg) {
  const std::size_t n = g.size();
  if (g.total_weight() <= 0.0) throw UndefinedScoreError("modularity undefined on an edgeless graph");

  SearchResult trivial;
  trivial.best_labeling = TwoWayLabeling(n, true);
  trivial.best_score = 0.0;
  trivial.best_stats = subset_stats(g, trivial.best_labeling);
  if (n < 2 * cfg.min_side) return trivial;

  std::vector<TwoWayLabeling> seeds;
  TwoWayLabeling spectral;
  try {
    spectral = leading_eigenvector_split(g).labeling;
  } catch (const ConvergenceError& e) {
    spectral = TwoWayLabeling(n);
    for (NodeId i = 0; i < n; ++i) spectral.set(i, e.last_iterate()[i] >= 0.0);
  }
  const std::size_t inside = spectral.count();
  if (inside >= cfg.min_side && n - inside >= cfg.min_side) seeds.push_back(spectral);

  SearchResult best = detail::multi_start(g, Criterion::modularity2, nullptr, seeds, cfg);
  if (best.best_score < 0.0) return trivial;
  return best;
}

KWayLabeling sequential_modularity_partition(const Graph& g, const TabuConfig& cfg,
                                             std::optional<std::size_t> max_k) {
  const double total = g.total_weight();
  if (total <= 0.0) throw UndefinedScoreError("modularity undefined on an edgeless graph");
  KWayLabeling part;
  part.assignment.assign(g.size(), 0);
  part.k = 1;

  for (std::size_t step = 0; !max_k || part.k < *max_k; ++step) {
    double best_gain = 0.0;
    std::optional<std::size_t> best_community;
    std::vector<NodeId> best_members;
    TwoWayLabeling best_split;

    for (std::size_t c = 0; c < part.k; ++c) {
      std::vector<NodeId> members;
      for (NodeId i = 0; i < g.size(); ++i)
        if (part.assignment[i] == c) members.push_back(i);
      if (members.size() < 2 * cfg.min_side) continue;

      const Graph sub = g.induced(members);
      detail::SplitReference ref;
      ref.total = total;
      for (NodeId i : members) ref.degrees.push_back(g.degree(i));

      std::vector<TwoWayLabeling> seeds;
      if (sub.total_weight() > 0.0) {
        try {
          auto sp = leading_eigenvector_split(sub).labeling;
          const std::size_t inside = sp.count();
          if (inside >= cfg.min_side && sub.size() - inside >= cfg.min_side) seeds.push_back(sp);
        } catch (const ConvergenceError&) {
        }
      }
      TabuConfig split_cfg = cfg;
      split_cfg.seed = derive_seed(derive_seed(cfg.seed, step), c);
      const SearchResult r =
          detail::multi_start(sub, Criterion::modularity2, &ref, seeds, split_cfg);
      if (r.best_score > best_gain + 1e-12) {
        best_gain = r.best_score;
        best_community = c;
        best_members = std::move(members);
        best_split = r.best_labeling;
      }
    }
    if (!best_community) break;
    for (std::size_t local = 0; local < best_members.size(); ++local)
      if (!best_split.in_s(local)) part.assignment[best_members[local]] = part.k;
    ++part.k;
  }
  return part;
}

}  // namespace commex
