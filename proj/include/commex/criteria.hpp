#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "commex/graph.hpp"

namespace commex {

/// Membership of every node in a candidate set S (true) or its complement.
class TwoWayLabeling {
 public:
  TwoWayLabeling() = default;
  explicit TwoWayLabeling(std::size_t n, bool value = false) : in_(n, value ? 1 : 0) {}
  static TwoWayLabeling from_members(std::size_t n, std::span<const NodeId> members);
  /// s_i = +1 puts node i in S.
  static TwoWayLabeling from_signs(std::span<const int> signs);

  std::size_t size() const noexcept { return in_.size(); }
  bool in_s(NodeId i) const { return in_[i] != 0; }
  int sign(NodeId i) const { return in_[i] ? 1 : -1; }
  void set(NodeId i, bool value) { in_[i] = value ? 1 : 0; }
  void flip(NodeId i) { in_[i] ^= 1; }
  std::size_t count() const;
  std::vector<NodeId> members() const;
  std::vector<NodeId> complement() const;

  friend bool operator==(const TwoWayLabeling&, const TwoWayLabeling&) = default;

 private:
  std::vector<unsigned char> in_;
};

/// The sufficient statistics of a subset: |S|, O(S) and B(S).
///
/// O(S) sums A_ij over ordered pairs inside S, so it is twice the internal weight;
/// B(S) is the weight crossing between S and its complement.
struct SubsetStats {
  std::size_t size = 0;
  double o = 0.0;
  double b = 0.0;

  friend bool operator==(const SubsetStats&, const SubsetStats&) = default;
};

enum class Criterion { original, adjusted, modularity2 };

const char* to_string(Criterion c) noexcept;
/// Parses "original", "adjusted" or "modularity"/"modularity2"; throws DomainError.
Criterion parse_criterion(std::string_view name);

SubsetStats subset_stats(const Graph& g, const TwoWayLabeling& s);

/// W(S) = O/|S|^2 - B/(|S||S^c|). Throws InfeasibleError unless 1 <= |S| <= n-1.
double extraction_score(const SubsetStats& stats, std::size_t n);
/// W_a(S) = |S||S^c| W(S).
double adjusted_score(const SubsetStats& stats, std::size_t n);

/// Two-way modularity from subset statistics alone, with `total` = 2m. The volume of
/// S is O + B, so this only holds when the stats cover the whole graph.
double modularity_from_stats(const SubsetStats& stats, double total);

/// Dispatches to the criterion above; `total` is only read for modularity2.
double criterion_score(Criterion c, const SubsetStats& stats, std::size_t n, double total);

struct SwitchResult {
  double score = 0.0;
  SubsetStats stats;
};

/// Score and stats after moving `node` across the cut, using only the node's
/// incident weights. Throws InfeasibleError if S or S^c would become empty.
SwitchResult switch_delta(const Graph& g, const TwoWayLabeling& s, const SubsetStats& stats,
                          NodeId node, Criterion c);

/// Q = (1/4m) sum_ij (A_ij - k_i k_j / 2m) s_i s_j. Throws UndefinedScoreError when 2m = 0.
double modularity_score(const Graph& g, const TwoWayLabeling& s);
/// K-way modularity (1/2m) sum_ij (A_ij - k_i k_j / 2m) [c_i == c_j].
double modularity_score(const Graph& g, std::span<const std::size_t> communities);

/// Configuration-model edge probability k_i k_j / 2m (may exceed 1).
double config_null_prob(const Graph& g, NodeId i, NodeId j);

struct CutScores {
  double cut = 0.0;
  double ratio_cut = 0.0;
  double normalized_cut = 0.0;
};

/// Cut R between S (V1) and S^c (V2), R/(|V1||V2|) and R/D1 + R/D2.
CutScores cut_scores(const Graph& g, const TwoWayLabeling& s);

}  // namespace commex
