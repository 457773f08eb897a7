#include "commex/pipeline.hpp"

#include <algorithm>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "commex/error.hpp"

namespace commex {

Extraction extract_one(const Graph& g, std::span<const NodeId> active, Criterion criterion,
                       const TabuConfig& cfg) {
  if (criterion == Criterion::modularity2) {
    throw DomainError("extraction needs the original or adjusted criterion");
  }
  if (active.size() < 2) throw InfeasibleError("extraction needs at least two active nodes");
  const Graph sub = g.induced(active);
  const SearchResult found = multi_start(sub, criterion, cfg);
  Extraction out;
  out.score = found.best_score;
  for (NodeId local : found.best_labeling.members()) out.community.push_back(active[local]);
  std::sort(out.community.begin(), out.community.end());
  return out;
}

ExtractionResult extract_sequence(const Graph& g, Criterion criterion, const TabuConfig& cfg,
                                  const StopRule& stop) {
  ExtractionResult result;
  result.criterion = criterion;
  std::vector<NodeId> active(g.size());
  for (NodeId i = 0; i < g.size(); ++i) active[i] = i;

  for (std::size_t round = 0;; ++round) {
    if (stop.max_communities && result.communities.size() >= *stop.max_communities) break;
    if (active.size() < 2) break;
    TabuConfig round_cfg = cfg;
    round_cfg.seed = derive_seed(cfg.seed, round);
    Extraction found = extract_one(g, active, criterion, round_cfg);
    if (found.community.size() < stop.min_size) break;

    std::vector<NodeId> rest;
    std::set_difference(active.begin(), active.end(), found.community.begin(),
                        found.community.end(), std::back_inserter(rest));
    active = std::move(rest);
    result.communities.push_back(
        {result.communities.size() + 1, std::move(found.community), found.score});
  }
  result.background = std::move(active);
  return result;
}

void write_extraction_json(std::ostream& out, const Graph& g, const ExtractionResult& result) {
  auto names = [&](const std::vector<NodeId>& nodes) {
    nlohmann::json arr = nlohmann::json::array();
    for (NodeId i : nodes) arr.push_back(g.label(i));
    return arr;
  };
  nlohmann::json doc;
  doc["criterion"] = to_string(result.criterion);
  doc["communities"] = nlohmann::json::array();
  for (const auto& c : result.communities) {
    doc["communities"].push_back(
        {{"rank", c.rank}, {"score", c.score}, {"size", c.members.size()}, {"members", names(c.members)}});
  }
  doc["background"] = names(result.background);
  out << doc.dump(2) << '\n';
}

ExtractionResult read_extraction_json(std::istream& in, const Graph& g) {
  std::unordered_map<std::string, NodeId> node_of;
  for (NodeId i = 0; i < g.size(); ++i) node_of.emplace(g.label(i), i);
  auto resolve = [&](const nlohmann::json& arr) {
    std::vector<NodeId> nodes;
    for (const auto& item : arr) {
      const std::string name = item.is_string() ? item.get<std::string>() : item.dump();
      auto it = node_of.find(name);
      if (it == node_of.end()) throw ParseError("result names unknown node '" + name + "'", 0);
      nodes.push_back(it->second);
    }
    std::sort(nodes.begin(), nodes.end());
    return nodes;
  };

  ExtractionResult result;
  try {
    const auto doc = nlohmann::json::parse(in);
    result.criterion = parse_criterion(doc.value("criterion", std::string("adjusted")));
    for (const auto& c : doc.at("communities")) {
      result.communities.push_back(
          {c.at("rank").get<std::size_t>(), resolve(c.at("members")), c.value("score", 0.0)});
    }
    result.background = resolve(doc.value("background", nlohmann::json::array()));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid result document: ") + e.what(), 0);
  }
  return result;
}

}  // namespace commex
