#include "commex/evaluation.hpp"

#include <algorithm>

#include "commex/error.hpp"

namespace commex {
namespace {

std::size_t label_count(std::span<const std::size_t> labels) {
  std::size_t k = 0;
  for (auto l : labels) k = std::max(k, l + 1);
  return k;
}

}  // namespace

Table confusion_matrix(std::span<const std::size_t> proposed, std::span<const std::size_t> truth) {
  if (proposed.size() != truth.size()) throw DomainError("labelings differ in length");
  if (proposed.empty()) throw DomainError("confusion matrix of an empty labeling");
  Table r(label_count(proposed), label_count(truth));
  const double unit = 1.0 / static_cast<double>(proposed.size());
  for (std::size_t i = 0; i < proposed.size(); ++i) r(proposed[i], truth[i]) += unit;
  return r;
}

Table block_edge_counts(const Graph& g, std::span<const std::size_t> proposed) {
  if (proposed.size() != g.size()) throw DomainError("labeling size does not match graph");
  const std::size_t k = label_count(proposed);
  Table o(k, k);
  for (NodeId i = 0; i < g.size(); ++i) {
    auto nb = g.neighbors(i);
    auto ws = g.weights(i);
    for (std::size_t t = 0; t < nb.size(); ++t) o(proposed[i], proposed[nb[t]]) += ws[t];
  }
  return o;
}

MatchScore match_and_score(std::span<const NodeId> extracted,
                           std::span<const std::size_t> true_labels,
                           std::optional<std::size_t> background_label) {
  const std::size_t n = true_labels.size();
  std::vector<unsigned char> in_s(n, 0);
  for (NodeId i : extracted) {
    if (i >= n) throw DomainError("extracted node out of range");
    if (in_s[i]) throw DomainError("extracted set lists a node twice");
    in_s[i] = 1;
  }
  const std::size_t size_s = extracted.size();
  if (size_s == 0 || size_s == n) throw InfeasibleError("PPV/NPV need S and S^c nonempty");

  const std::size_t k = label_count(true_labels);
  std::vector<std::size_t> inside(k, 0), outside(k, 0);
  for (std::size_t i = 0; i < n; ++i) (in_s[i] ? inside : outside)[true_labels[i]] += 1;

  MatchScore out;
  out.matched_class = static_cast<std::size_t>(
      std::max_element(inside.begin(), inside.end()) - inside.begin());
  out.ppv = static_cast<double>(inside[out.matched_class]) / static_cast<double>(size_s);
  out.npv = 1.0 - static_cast<double>(outside[out.matched_class]) /
                      static_cast<double>(n - size_s);
  out.matched_background = background_label && *background_label == out.matched_class;
  return out;
}

}  // namespace commex
