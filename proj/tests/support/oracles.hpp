// Independent reference computations used by the unit and acceptance tests. Nothing
// here calls the scoring or search code under test: subsets are scored from a dense
// copy of the adjacency matrix and optima are found by exhaustive enumeration.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "commex/graph.hpp"

namespace oracle {

using commex::EdgeRecord;
using commex::Graph;
using commex::NodeId;
using Dense = std::vector<std::vector<double>>;

inline Dense dense(const Graph& g) {
  Dense a(g.size(), std::vector<double>(g.size(), 0.0));
  for (NodeId i = 0; i < g.size(); ++i) {
    auto nb = g.neighbors(i);
    auto ws = g.weights(i);
    for (std::size_t t = 0; t < nb.size(); ++t) a[i][nb[t]] = ws[t];
  }
  return a;
}

/// Triangle 0-1-2 plus the pendant edge 2-3.
inline Graph g1() {
  const std::vector<EdgeRecord> e{{0, 1}, {1, 2}, {0, 2}, {2, 3}};
  return Graph::from_edges(4, e);
}

inline Graph clique_union(std::size_t cliques, std::size_t size, bool chain) {
  std::vector<EdgeRecord> e;
  for (std::size_t c = 0; c < cliques; ++c) {
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = i + 1; j < size; ++j) e.push_back({c * size + i, c * size + j});
    if (chain && c + 1 < cliques) e.push_back({c * size + size - 1, (c + 1) * size});
  }
  return Graph::from_edges(cliques * size, e);
}

inline Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed, bool weighted = false) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<EdgeRecord> e;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (u(rng) < p) e.push_back({i, j, weighted ? 0.5 + 2.0 * u(rng) : 1.0});
  return Graph::from_edges(n, e);
}

struct Counts {
  std::size_t size = 0;
  double o = 0.0;  // ordered pairs inside S
  double b = 0.0;  // weight across the cut
  double vol = 0.0;
};

inline Counts count(const Dense& a, std::uint64_t mask) {
  Counts c;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    const bool in_i = (mask >> i) & 1;
    c.size += in_i;
    for (std::size_t j = 0; j < n; ++j) {
      const bool in_j = (mask >> j) & 1;
      if (in_i && in_j) c.o += a[i][j];
      if (in_i && !in_j) c.b += a[i][j];
      if (in_i) c.vol += a[i][j];
    }
  }
  return c;
}

inline double w_original(const Dense& a, std::uint64_t mask) {
  const Counts c = count(a, mask);
  const double s = static_cast<double>(c.size), r = static_cast<double>(a.size() - c.size);
  return c.o / (s * s) - c.b / (s * r);
}

inline double w_adjusted(const Dense& a, std::uint64_t mask) {
  const Counts c = count(a, mask);
  const double s = static_cast<double>(c.size), r = static_cast<double>(a.size() - c.size);
  return s * r * (c.o / (s * s) - c.b / (s * r));
}

/// Q = (1/4m) sum_ij (A_ij - k_i k_j / 2m) s_i s_j by direct double summation.
inline double modularity(const Dense& a, const std::vector<int>& sign) {
  const std::size_t n = a.size();
  std::vector<double> k(n, 0.0);
  double two_m = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) k[i] += a[i][j];
  for (double d : k) two_m += d;
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q += (a[i][j] - k[i] * k[j] / two_m) * sign[i] * sign[j];
  return q / (2.0 * two_m);
}

inline std::vector<int> signs_of(std::uint64_t mask, std::size_t n) {
  std::vector<int> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = ((mask >> i) & 1) ? 1 : -1;
  return s;
}

inline std::vector<NodeId> members_of(std::uint64_t mask, std::size_t n) {
  std::vector<NodeId> m;
  for (std::size_t i = 0; i < n; ++i)
    if ((mask >> i) & 1) m.push_back(i);
  return m;
}

struct Optimum {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> argmax;  // every mask within `tie` of the maximum
};

/// Exhaustive maximum of f over the proper nonempty subsets of n nodes.
template <class F>
Optimum enumerate(std::size_t n, F f, double tie = 1e-9) {
  Optimum best;
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::vector<std::pair<std::uint64_t, double>> all;
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    const double v = f(mask);
    all.emplace_back(mask, v);
    if (v > best.value) best.value = v;
  }
  for (const auto& [mask, v] : all)
    if (v >= best.value - tie) best.argmax.push_back(mask);
  return best;
}

struct Eigen {
  std::vector<double> values;   // ascending
  std::vector<std::vector<double>> vectors;  // vectors[k] pairs with values[k]
};

/// Cyclic Jacobi rotations for a small dense symmetric matrix.
inline Eigen jacobi(Dense m) {
  const std::size_t n = m.size();
  Dense v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += m[p][q] * m[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(m[p][q]) < 1e-300) continue;
        const double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double mkp = m[k][p], mkq = m[k][q];
          m[k][p] = c * mkp - s * mkq;
          m[k][q] = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double mpk = m[p][k], mqk = m[q][k];
          m[p][k] = c * mpk - s * mqk;
          m[q][k] = s * mpk + c * mqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto x, auto y) { return m[x][x] < m[y][y]; });
  Eigen out;
  for (auto k : idx) {
    out.values.push_back(m[k][k]);
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = v[i][k];
    out.vectors.push_back(col);
  }
  return out;
}

inline Dense modularity_matrix(const Dense& a) {
  const std::size_t n = a.size();
  std::vector<double> k(n, 0.0);
  double two_m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) k[i] += a[i][j];
    two_m += k[i];
  }
  Dense b(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b[i][j] = a[i][j] - k[i] * k[j] / two_m;
  return b;
}

/// Population value of a two-block labeling built from its confusion matrix R:
/// rows are (S, S^c), columns the true blocks, with t1 = r11/(r11+r12) and
/// t2 = r22/(r21+r22). The original criterion is (RPR')_11/s^2 - (RPR')_12/(s(1-s))
/// with s = r11 + r12; the adjusted one multiplies by s(1-s).
inline double population_from_confusion(double t1, double t2, double pi, double p11, double p12,
                                        double p22, bool adjusted) {
  const double s = (t2 - (1.0 - pi)) / (t1 + t2 - 1.0);
  const double r[2][2] = {{t1 * s, (1.0 - t1) * s}, {(1.0 - t2) * (1.0 - s), t2 * (1.0 - s)}};
  const double p[2][2] = {{p11, p12}, {p12, p22}};
  double rpr[2][2] = {};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) rpr[a][b] += r[a][k] * p[k][l] * r[b][l];
  const double w = rpr[0][0] / (s * s) - rpr[0][1] / (s * (1.0 - s));
  return adjusted ? s * (1.0 - s) * w : w;
}

}  // namespace oracle
