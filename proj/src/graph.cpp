#include "commex/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "commex/error.hpp"

namespace commex {

Graph Graph::from_edges(std::size_t n, std::span<const EdgeRecord> edges,
                        std::vector<std::string> labels) {
  std::vector<std::vector<std::pair<NodeId, double>>> rows(n);
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n) throw DomainError("edge endpoint out of range");
    if (!(e.w >= 0.0)) throw DomainError("negative or NaN edge weight");
    if (e.u == e.v || e.w == 0.0) continue;
    rows[e.u].emplace_back(e.v, e.w);
    rows[e.v].emplace_back(e.u, e.w);
  }

  Graph g;
  g.offsets_.assign(1, 0);
  g.offsets_.reserve(n + 1);
  g.degrees_.assign(n, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    auto& row = rows[i];
    std::sort(row.begin(), row.end());
    for (std::size_t k = 1; k < row.size(); ++k) {
      if (row[k].first == row[k - 1].first) {
        throw DuplicateEdgeError("duplicate edge between nodes " + std::to_string(i) + " and " +
                                     std::to_string(row[k].first),
                                 0);
      }
    }
    for (const auto& [j, w] : row) {
      g.targets_.push_back(j);
      g.weights_.push_back(w);
      g.degrees_[i] += w;
    }
    g.offsets_.push_back(g.targets_.size());
  }
  g.total_ = std::accumulate(g.degrees_.begin(), g.degrees_.end(), 0.0);

  if (labels.empty()) {
    labels.reserve(n);
    for (NodeId i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  } else if (labels.size() != n) {
    throw DomainError("label count does not match node count");
  }
  g.labels_ = std::move(labels);
  return g;
}

double Graph::weight(NodeId i, NodeId j) const {
  auto nb = neighbors(i);
  auto it = std::lower_bound(nb.begin(), nb.end(), j);
  if (it == nb.end() || *it != j) return 0.0;
  return weights_[offsets_[i] + static_cast<std::size_t>(it - nb.begin())];
}

Graph Graph::induced(std::span<const NodeId> nodes) const {
  constexpr NodeId kAbsent = static_cast<NodeId>(-1);
  std::vector<NodeId> local(size(), kAbsent);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (local[nodes[k]] != kAbsent) throw DomainError("induced: repeated node");
    local[nodes[k]] = k;
  }
  std::vector<EdgeRecord> edges;
  std::vector<std::string> labels;
  labels.reserve(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const NodeId i = nodes[k];
    labels.push_back(labels_[i]);
    auto nb = neighbors(i);
    auto ws = weights(i);
    for (std::size_t t = 0; t < nb.size(); ++t) {
      const NodeId l = local[nb[t]];
      if (l != kAbsent && k < l) edges.push_back({k, l, ws[t]});
    }
  }
  return from_edges(nodes.size(), edges, std::move(labels));
}

namespace {

double parse_weight(const std::string& tok, std::size_t line) {
  double w = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), w);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("malformed weight '" + tok + "'", line);
  }
  if (w < 0.0) throw DomainError("line " + std::to_string(line) + ": negative weight");
  return w;
}

}  // namespace

LoadedGraph load_edge_list(std::istream& in, DirectedMode mode) {
  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::string> labels;
  auto intern = [&](const std::string& tok) {
    auto [it, inserted] = ids.try_emplace(tok, labels.size());
    if (inserted) labels.push_back(tok);
    return it->second;
  };

  // Keyed by (u, v); undirected records use (min, max).
  std::map<std::pair<NodeId, NodeId>, double> records;
  std::size_t dropped = 0;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream fields(raw);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(std::move(t));
    if (tok.empty()) continue;
    if (tok.size() < 2 || tok.size() > 3) {
      throw ParseError("expected 'u v [w]', got " + std::to_string(tok.size()) + " fields",
                       line_no);
    }
    const double w = tok.size() == 3 ? parse_weight(tok[2], line_no) : 1.0;
    const NodeId u = intern(tok[0]);
    const NodeId v = intern(tok[1]);
    if (u == v) {
      ++dropped;
      continue;
    }
    const std::pair<NodeId, NodeId> key =
        mode == DirectedMode::undirected ? std::pair{std::min(u, v), std::max(u, v)} : std::pair{u, v};
    if (!records.emplace(key, w).second) {
      throw DuplicateEdgeError("duplicate edge " + tok[0] + " " + tok[1], line_no);
    }
  }

  std::vector<EdgeRecord> edges;
  edges.reserve(records.size());
  if (mode == DirectedMode::undirected) {
    for (const auto& [key, w] : records) edges.push_back({key.first, key.second, w});
  } else {
    for (const auto& [key, w] : records) {
      const auto [u, v] = key;
      auto reverse = records.find({v, u});
      if (reverse != records.end() && v < u) continue;  // pair already emitted
      const double back = reverse == records.end() ? 0.0 : reverse->second;
      edges.push_back({u, v, (w + back) / 2.0});
    }
  }
  const std::size_t n = labels.size();
  return {Graph::from_edges(n, edges, std::move(labels)), dropped};
}

LoadedGraph load_edge_list_file(const std::string& path, DirectedMode mode) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open edge list '" + path + "'", 0);
  return load_edge_list(in, mode);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  auto old_precision = out.precision(17);
  for (NodeId i = 0; i < g.size(); ++i) {
    auto nb = g.neighbors(i);
    if (nb.empty()) {
      out << g.label(i) << ' ' << g.label(i) << " 0\n";
      continue;
    }
    auto ws = g.weights(i);
    for (std::size_t t = 0; t < nb.size(); ++t) {
      if (i < nb[t]) out << g.label(i) << ' ' << g.label(nb[t]) << ' ' << ws[t] << '\n';
    }
  }
  out.precision(old_precision);
}

std::vector<double> degree_vector(const Graph& g) {
  return {g.degrees().begin(), g.degrees().end()};
}

TrueLabels load_labels(std::istream& in, const Graph& g) {
  std::unordered_map<std::string, NodeId> node_of;
  for (NodeId i = 0; i < g.size(); ++i) node_of.emplace(g.label(i), i);

  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  TrueLabels out;
  out.classes.assign(g.size(), kUnset);
  std::unordered_map<std::string, std::size_t> class_of;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream fields(raw);
    std::string node, label, extra;
    if (!(fields >> node)) continue;
    if (!(fields >> label) || (fields >> extra)) {
      throw ParseError("expected 'node_id true_label'", line_no);
    }
    auto it = node_of.find(node);
    if (it == node_of.end()) throw ParseError("unknown node '" + node + "'", line_no);
    if (out.classes[it->second] != kUnset) {
      throw ParseError("node '" + node + "' labelled twice", line_no);
    }
    auto [cit, inserted] = class_of.try_emplace(label, out.class_names.size());
    if (inserted) out.class_names.push_back(label);
    out.classes[it->second] = cit->second;
  }
  for (NodeId i = 0; i < g.size(); ++i) {
    if (out.classes[i] == kUnset) throw ParseError("node '" + g.label(i) + "' has no label", 0);
  }
  return out;
}

TrueLabels load_labels_file(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open label file '" + path + "'", 0);
  return load_labels(in, g);
}

}  // namespace commex
