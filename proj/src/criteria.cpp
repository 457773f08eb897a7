#include "commex/criteria.hpp"

#include <algorithm>
#include <string>

#include "commex/error.hpp"

namespace commex {

TwoWayLabeling TwoWayLabeling::from_members(std::size_t n, std::span<const NodeId> members) {
  TwoWayLabeling s(n);
  for (NodeId i : members) {
    if (i >= n) throw DomainError("member index out of range");
    s.set(i, true);
  }
  return s;
}

TwoWayLabeling TwoWayLabeling::from_signs(std::span<const int> signs) {
  TwoWayLabeling s(signs.size());
  for (std::size_t i = 0; i < signs.size(); ++i) s.set(i, signs[i] > 0);
  return s;
}

std::size_t TwoWayLabeling::count() const {
  return static_cast<std::size_t>(std::count(in_.begin(), in_.end(), 1));
}

std::vector<NodeId> TwoWayLabeling::members() const {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < in_.size(); ++i)
    if (in_[i]) out.push_back(i);
  return out;
}

std::vector<NodeId> TwoWayLabeling::complement() const {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < in_.size(); ++i)
    if (!in_[i]) out.push_back(i);
  return out;
}

const char* to_string(Criterion c) noexcept {
  switch (c) {
    case Criterion::original: return "original";
    case Criterion::adjusted: return "adjusted";
    case Criterion::modularity2: return "modularity";
  }
  return "?";
}

Criterion parse_criterion(std::string_view name) {
  if (name == "original") return Criterion::original;
  if (name == "adjusted") return Criterion::adjusted;
  if (name == "modularity" || name == "modularity2") return Criterion::modularity2;
  throw DomainError("unknown criterion '" + std::string(name) + "'");
}

SubsetStats subset_stats(const Graph& g, const TwoWayLabeling& s) {
  SubsetStats st;
  for (NodeId i = 0; i < g.size(); ++i) {
    if (!s.in_s(i)) continue;
    ++st.size;
    auto nb = g.neighbors(i);
    auto ws = g.weights(i);
    for (std::size_t t = 0; t < nb.size(); ++t) {
      if (s.in_s(nb[t]))
        st.o += ws[t];
      else
        st.b += ws[t];
    }
  }
  return st;
}

namespace {

void require_feasible(const SubsetStats& stats, std::size_t n) {
  if (stats.size == 0 || stats.size >= n) {
    throw InfeasibleError("criterion undefined for |S| = " + std::to_string(stats.size) +
                          " with n = " + std::to_string(n));
  }
}

}  // namespace

double extraction_score(const SubsetStats& stats, std::size_t n) {
  require_feasible(stats, n);
  const double s = static_cast<double>(stats.size);
  const double sc = static_cast<double>(n - stats.size);
  return stats.o / (s * s) - stats.b / (s * sc);
}

double adjusted_score(const SubsetStats& stats, std::size_t n) {
  require_feasible(stats, n);
  const double s = static_cast<double>(stats.size);
  const double sc = static_cast<double>(n - stats.size);
  // |S||S^c| W(S) with the factor distributed over both terms.
  return stats.o * sc / s - stats.b;
}

double modularity_from_stats(const SubsetStats& stats, double total) {
  if (total <= 0.0) throw UndefinedScoreError("modularity undefined on an edgeless graph");
  const double vol = stats.o + stats.b;
  const double imbalance = 2.0 * vol - total;  // vol(S) - vol(S^c)
  return (total - 4.0 * stats.b - imbalance * imbalance / total) / (2.0 * total);
}

double criterion_score(Criterion c, const SubsetStats& stats, std::size_t n, double total) {
  switch (c) {
    case Criterion::original: return extraction_score(stats, n);
    case Criterion::adjusted: return adjusted_score(stats, n);
    case Criterion::modularity2: return modularity_from_stats(stats, total);
  }
  return 0.0;
}

SwitchResult switch_delta(const Graph& g, const TwoWayLabeling& s, const SubsetStats& stats,
                          NodeId node, Criterion c) {
  const std::size_t n = g.size();
  const bool leaving = s.in_s(node);
  if ((leaving && stats.size <= 1) || (!leaving && stats.size + 1 >= n)) {
    throw InfeasibleError("switching node " + std::to_string(node) +
                          " would leave S or its complement empty");
  }
  double to_s = 0.0;
  auto nb = g.neighbors(node);
  auto ws = g.weights(node);
  for (std::size_t t = 0; t < nb.size(); ++t)
    if (s.in_s(nb[t])) to_s += ws[t];
  const double to_rest = g.degree(node) - to_s;

  SwitchResult r;
  r.stats = stats;
  if (leaving) {
    r.stats.size -= 1;
    r.stats.o -= 2.0 * to_s;
    r.stats.b += to_s - to_rest;
  } else {
    r.stats.size += 1;
    r.stats.o += 2.0 * to_s;
    r.stats.b += to_rest - to_s;
  }
  r.score = criterion_score(c, r.stats, n, g.total_weight());
  return r;
}

double modularity_score(const Graph& g, const TwoWayLabeling& s) {
  if (s.size() != g.size()) throw DomainError("labeling size does not match graph");
  return modularity_from_stats(subset_stats(g, s), g.total_weight());
}

double modularity_score(const Graph& g, std::span<const std::size_t> communities) {
  if (communities.size() != g.size()) throw DomainError("labeling size does not match graph");
  const double total = g.total_weight();
  if (total <= 0.0) throw UndefinedScoreError("modularity undefined on an edgeless graph");
  std::size_t k = 0;
  for (auto c : communities) k = std::max(k, c + 1);
  std::vector<double> vol(k, 0.0);
  double inside = 0.0;
  for (NodeId i = 0; i < g.size(); ++i) {
    vol[communities[i]] += g.degree(i);
    auto nb = g.neighbors(i);
    auto ws = g.weights(i);
    for (std::size_t t = 0; t < nb.size(); ++t)
      if (communities[nb[t]] == communities[i]) inside += ws[t];
  }
  double expected = 0.0;
  for (double v : vol) expected += v * v;
  return (inside - expected / total) / total;
}

double config_null_prob(const Graph& g, NodeId i, NodeId j) {
  const double total = g.total_weight();
  if (total <= 0.0) throw UndefinedScoreError("null model undefined on an edgeless graph");
  return g.degree(i) * g.degree(j) / total;
}

CutScores cut_scores(const Graph& g, const TwoWayLabeling& s) {
  const auto st = subset_stats(g, s);
  const std::size_t n = g.size();
  if (st.size == 0 || st.size == n) throw InfeasibleError("cut scores need two nonempty sides");
  const double d1 = st.o + st.b;
  const double d2 = g.total_weight() - d1;
  if (d1 <= 0.0 || d2 <= 0.0) throw UndefinedScoreError("normalized cut undefined: zero volume");
  CutScores out;
  out.cut = st.b;
  out.ratio_cut = st.b / (static_cast<double>(st.size) * static_cast<double>(n - st.size));
  out.normalized_cut = st.b / d1 + st.b / d2;
  return out;
}

}  // namespace commex
