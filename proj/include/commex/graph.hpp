#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace commex {

using NodeId = std::size_t;

struct EdgeRecord {
  NodeId u = 0;
  NodeId v = 0;
  double w = 1.0;
};

/// Undirected weighted network stored as a symmetric CSR adjacency.
///
/// The diagonal is always zero and all weights are nonnegative. Degrees and the
/// total weight 2m are cached at construction; the object is immutable afterwards,
/// so concurrent reads are safe.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph over `n` nodes from undirected edges. Self-loops are dropped,
  /// zero weights are skipped, a pair listed twice raises DuplicateEdgeError and a
  /// negative weight raises DomainError.
  static Graph from_edges(std::size_t n, std::span<const EdgeRecord> edges,
                          std::vector<std::string> labels = {});

  std::size_t size() const noexcept { return degrees_.size(); }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId i) const {
    return {targets_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::span<const double> weights(NodeId i) const {
    return {weights_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  /// A_ij, by binary search in row i.
  double weight(NodeId i, NodeId j) const;

  double degree(NodeId i) const { return degrees_[i]; }
  std::span<const double> degrees() const noexcept { return degrees_; }
  /// 2m = sum of all degrees.
  double total_weight() const noexcept { return total_; }

  /// Original node label (as read from input) or the decimal index when none was given.
  const std::string& label(NodeId i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Subgraph induced by `nodes`; node k of the result is nodes[k] of this graph.
  Graph induced(std::span<const NodeId> nodes) const;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> targets_;
  std::vector<double> weights_;
  std::vector<double> degrees_;
  std::vector<std::string> labels_;
  double total_ = 0.0;
};

enum class DirectedMode { undirected, average_directed };

struct LoadedGraph {
  Graph graph;
  std::size_t dropped_self_loops = 0;
};

/// Reads whitespace-separated `u v [w]` lines; `#` starts a comment. Node ids are
/// arbitrary tokens compacted to 0..n-1 in order of first appearance.
///
/// In average_directed mode each record is a directed edge and the undirected
/// weight is (w_uv + w_vu) / 2, a missing direction counting as 0.
LoadedGraph load_edge_list(std::istream& in, DirectedMode mode = DirectedMode::undirected);
LoadedGraph load_edge_list_file(const std::string& path,
                                DirectedMode mode = DirectedMode::undirected);

/// Writes `u v w` for every edge with u < v, using the original labels. Nodes
/// without edges are written as `u u 0` self-loop records so a reload keeps them.
void write_edge_list(std::ostream& out, const Graph& g);

std::vector<double> degree_vector(const Graph& g);

/// Ground-truth classes read from a `node_id true_label` file.
struct TrueLabels {
  std::vector<std::size_t> classes;      // per graph node
  std::vector<std::string> class_names;  // class id -> label, first-appearance order
};

TrueLabels load_labels(std::istream& in, const Graph& g);
TrueLabels load_labels_file(const std::string& path, const Graph& g);

}  // namespace commex
