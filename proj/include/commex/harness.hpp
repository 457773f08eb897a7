#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "commex/blockmodel.hpp"
#include "commex/tabu.hpp"

namespace commex {

enum class Design { toy, two_communities, one_community_bg, two_communities_bg, custom };
/// `modularity` is the leading-eigenvector sign split; `modularity_tabu` refines
/// two-way modularity with tabu search.
enum class Method { original, adjusted, modularity, modularity_tabu };

const char* to_string(Design d) noexcept;
const char* to_string(Method m) noexcept;
Design parse_design(std::string_view name);
Method parse_method(std::string_view name);

/// One simulation setting: a block model, how many replications to draw and which
/// methods to score on each draw.
struct Scenario {
  std::string id = "scenario";
  Design design = Design::custom;
  BlockModelParams params;
  /// True class of the background nodes, if the design has a background.
  std::optional<std::size_t> background_class;
  std::size_t reps = 10;
  std::vector<Method> methods{Method::original, Method::adjusted, Method::modularity};
  std::uint64_t seed = 1;
  TabuConfig tabu;
};

/// Default parameters of a named design.
Scenario make_scenario(Design design);

/// Builds a scenario from a JSON object. Recognised keys:
///   id, design, reps, seed, methods, restarts, max_iters, tenure,
///   n, n1, p11, p12, p22, p_bg, x           (design presets)
///   sizes | pi, p, rho, background_class     (custom block model)
/// Throws DomainError (before any sampling) if the resulting model is invalid.
Scenario scenario_from_json(const nlohmann::json& doc);
Scenario load_scenario_file(const std::string& path);

struct ResultRow {
  std::string scenario;
  std::size_t rep = 0;
  Method method = Method::adjusted;
  std::size_t rank = 1;
  double ppv = 0.0;
  double npv = 0.0;
  std::size_t matched_class = 0;
  std::size_t size = 0;   // |S|
  std::size_t n = 0;
  double score = 0.0;     // criterion value of the proposal
};

/// Samples sc.reps networks (replication r uses derive_seed(sc.seed, r)) and scores
/// every method on each. Extraction methods contribute the first extracted
/// community. A modularity split contributes one of its sides, chosen by
/// modularity_side. Rows are sorted by (rep, method, rank), so the output does not
/// depend on `threads`.
std::vector<ResultRow> run_scenario(const Scenario& sc, std::size_t threads = 1);

/// The side of a two-way split scored as the community: the side whose plurality
/// true class is not the background; when both or neither are, the side with the
/// higher PPV, then the larger side.
std::vector<NodeId> modularity_side(const TwoWayLabeling& split,
                                    std::span<const std::size_t> truth,
                                    std::optional<std::size_t> background_class);

/// CSV with header
/// scenario,rep,method,rank,ppv,npv,matched_class,size,n,score
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);

struct Summary {
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};
Summary summarize(std::vector<double> values);

/// Grouped box plots (PPV and NPV per method) of the rows of one scenario or more.
void write_boxplot_svg(std::ostream& out, const std::vector<ResultRow>& rows);

}  // namespace commex
