#include "commex/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "commex/error.hpp"
#include "commex/evaluation.hpp"
#include "commex/partition.hpp"
#include "commex/pipeline.hpp"

namespace commex {

const char* to_string(Design d) noexcept {
  switch (d) {
    case Design::toy: return "toy";
    case Design::two_communities: return "two_communities";
    case Design::one_community_bg: return "one_community_bg";
    case Design::two_communities_bg: return "two_communities_bg";
    case Design::custom: return "custom";
  }
  return "?";
}

const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::original: return "original";
    case Method::adjusted: return "adjusted";
    case Method::modularity: return "modularity";
    case Method::modularity_tabu: return "modularity_tabu";
  }
  return "?";
}

Design parse_design(std::string_view name) {
  for (Design d : {Design::toy, Design::two_communities, Design::one_community_bg,
                   Design::two_communities_bg, Design::custom})
    if (name == to_string(d)) return d;
  throw DomainError("unknown design '" + std::string(name) + "'");
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::original, Method::adjusted, Method::modularity,
                   Method::modularity_tabu})
    if (name == to_string(m)) return m;
  throw DomainError("unknown method '" + std::string(name) + "'");
}

namespace {

using Matrix = std::vector<std::vector<double>>;

struct DesignKnobs {
  std::size_t n = 0;
  std::size_t n1 = 0;
  double p11 = 0, p12 = 0, p22 = 0, p_bg = 0, x = 0;
};

DesignKnobs default_knobs(Design d) {
  switch (d) {
    case Design::toy: return {60, 15, 0.5, 0.1, 0.1, 0.1, 0};
    case Design::two_communities: return {1000, 100, 0.5, 0.05, 0.4, 0, 0};
    case Design::one_community_bg: return {1000, 100, 0.1, 0.05, 0.05, 0.05, 0};
    case Design::two_communities_bg: return {1000, 100, 0, 0.05, 0, 0.05, 2};
    case Design::custom: return {};
  }
  return {};
}

void apply_knobs(Scenario& sc, const DesignKnobs& k) {
  auto& prm = sc.params;
  prm.n = k.n;
  prm.rho = 1.0;
  prm.pi.clear();
  switch (sc.design) {
    case Design::toy:
    case Design::one_community_bg:
      // Community plus background; the background links at p_bg to everyone.
      prm.sizes = std::vector<std::size_t>{k.n1, k.n - k.n1};
      prm.p = Matrix{{k.p11, k.p_bg}, {k.p_bg, k.p_bg}};
      sc.background_class = 1;
      break;
    case Design::two_communities:
      prm.sizes = std::vector<std::size_t>{k.n1, k.n - k.n1};
      prm.p = Matrix{{k.p11, k.p12}, {k.p12, k.p22}};
      sc.background_class.reset();
      break;
    case Design::two_communities_bg: {
      // Two communities of n1 nodes each with densities 0.05x and 0.04x.
      const double a = 0.05 * k.x, b = 0.04 * k.x;
      if (2 * k.n1 > k.n) throw DomainError("two communities do not fit into n nodes");
      prm.sizes = std::vector<std::size_t>{k.n1, k.n1, k.n - 2 * k.n1};
      prm.p = Matrix{{a, k.p_bg, k.p_bg}, {k.p_bg, b, k.p_bg}, {k.p_bg, k.p_bg, k.p_bg}};
      sc.background_class = 2;
      break;
    }
    case Design::custom: break;
  }
}

}  // namespace

Scenario make_scenario(Design design) {
  Scenario sc;
  sc.design = design;
  sc.id = to_string(design);
  apply_knobs(sc, default_knobs(design));
  if (design == Design::toy) sc.methods = {Method::adjusted, Method::modularity};
  return sc;
}

Scenario scenario_from_json(const nlohmann::json& doc) {
  try {
    Scenario sc;
    sc.design = parse_design(doc.value("design", std::string("custom")));
    sc.id = doc.value("id", std::string(to_string(sc.design)));
    if (sc.design == Design::custom) {
      sc.params.n = doc.at("n").get<std::size_t>();
      sc.params.p = doc.at("p").get<Matrix>();
      sc.params.rho = doc.value("rho", 1.0);
      if (doc.contains("sizes")) {
        sc.params.sizes = doc.at("sizes").get<std::vector<std::size_t>>();
      } else {
        sc.params.pi = doc.at("pi").get<std::vector<double>>();
      }
      if (doc.contains("background_class"))
        sc.background_class = doc.at("background_class").get<std::size_t>();
    } else {
      DesignKnobs k = default_knobs(sc.design);
      k.n = doc.value("n", k.n);
      k.n1 = doc.value("n1", k.n1);
      k.p11 = doc.value("p11", k.p11);
      k.p12 = doc.value("p12", k.p12);
      k.p22 = doc.value("p22", k.p22);
      k.p_bg = doc.value("p_bg", k.p_bg);
      k.x = doc.value("x", k.x);
      if (sc.design == Design::toy) {
        k.p11 = doc.value("p_in", k.p11);
        k.p_bg = doc.value("p_out", k.p_bg);
      }
      if (k.n1 > k.n) throw DomainError("community larger than the network");
      apply_knobs(sc, k);
      if (doc.contains("rho")) sc.params.rho = doc.at("rho").get<double>();
    }
    sc.reps = doc.value("reps", sc.reps);
    sc.seed = doc.value("seed", sc.seed);
    if (doc.contains("methods")) {
      sc.methods.clear();
      for (const auto& m : doc.at("methods")) sc.methods.push_back(parse_method(m.get<std::string>()));
    }
    sc.tabu.restarts = doc.value("restarts", sc.tabu.restarts);
    sc.tabu.max_iters = doc.value("max_iters", sc.tabu.max_iters);
    sc.tabu.tenure = doc.value("tenure", sc.tabu.tenure);
    if (sc.reps == 0) throw DomainError("reps must be at least 1");
    if (sc.methods.empty()) throw DomainError("no methods selected");
    validate(sc.params);
    return sc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid scenario: ") + e.what(), 0);
  }
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'", 0);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid scenario JSON: ") + e.what(), 0);
  }
  return scenario_from_json(doc);
}

namespace {

ResultRow score_set(const Scenario& sc, std::size_t rep, Method m, std::size_t rank,
                    const std::vector<NodeId>& members, const std::vector<std::size_t>& truth,
                    double score) {
  const MatchScore ms = match_and_score(members, truth, sc.background_class);
  ResultRow row;
  row.scenario = sc.id;
  row.rep = rep;
  row.method = m;
  row.rank = rank;
  row.ppv = ms.ppv;
  row.npv = ms.npv;
  row.matched_class = ms.matched_class;
  row.size = members.size();
  row.n = truth.size();
  row.score = score;
  return row;
}

std::vector<ResultRow> run_replication(const Scenario& sc, std::size_t rep) {
  const std::uint64_t rep_seed = derive_seed(sc.seed, rep);
  const SampledNetwork net = sample_block_model(sc.params, rep_seed);
  std::vector<ResultRow> rows;
  std::vector<NodeId> all(net.graph.size());
  std::iota(all.begin(), all.end(), NodeId{0});

  for (Method m : sc.methods) {
    TabuConfig cfg = sc.tabu;
    cfg.threads = 1;
    cfg.seed = derive_seed(rep_seed, static_cast<std::uint64_t>(m) + 1);
    if (m == Method::modularity || m == Method::modularity_tabu) {
      if (net.graph.total_weight() <= 0.0) continue;
      TwoWayLabeling split;
      double q = 0.0;
      if (m == Method::modularity) {
        try {
          split = leading_eigenvector_split(net.graph).labeling;
        } catch (const ConvergenceError& e) {
          split = TwoWayLabeling(net.graph.size());
          for (NodeId i = 0; i < net.graph.size(); ++i) split.set(i, e.last_iterate()[i] >= 0.0);
        }
        q = modularity_score(net.graph, split);
      } else {
        const SearchResult found = modularity_two_way(net.graph, cfg);
        split = found.best_labeling;
        q = found.best_score;
      }
      auto side = modularity_side(split, net.labels, sc.background_class);
      if (side.size() == net.graph.size()) continue;  // no split with positive modularity
      rows.push_back(score_set(sc, rep, m, 1, side, net.labels, q));
    } else {
      const Criterion c = m == Method::original ? Criterion::original : Criterion::adjusted;
      const Extraction e = extract_one(net.graph, all, c, cfg);
      rows.push_back(score_set(sc, rep, m, 1, e.community, net.labels, e.score));
    }
  }
  return rows;
}

}  // namespace

std::vector<NodeId> modularity_side(const TwoWayLabeling& split,
                                    std::span<const std::size_t> truth,
                                    std::optional<std::size_t> background_class) {
  std::vector<NodeId> sides[2] = {split.members(), split.complement()};
  if (sides[0].empty() || sides[1].empty()) return sides[0].empty() ? sides[1] : sides[0];

  bool community[2];
  double purity[2];
  for (int k = 0; k < 2; ++k) {
    const MatchScore ms = match_and_score(sides[k], truth, background_class);
    community[k] = !ms.matched_background;
    purity[k] = ms.ppv;
  }
  if (community[0] != community[1]) return community[0] ? sides[0] : sides[1];
  if (purity[0] != purity[1]) return purity[0] > purity[1] ? sides[0] : sides[1];
  return sides[0].size() >= sides[1].size() ? sides[0] : sides[1];
}

std::vector<ResultRow> run_scenario(const Scenario& sc, std::size_t threads) {
  validate(sc.params);
  if (sc.reps == 0) throw DomainError("reps must be at least 1");

  std::vector<std::vector<ResultRow>> per_rep(sc.reps);
  const std::size_t workers = std::min(std::max<std::size_t>(1, threads), sc.reps);
  if (workers == 1) {
    for (std::size_t r = 0; r < sc.reps; ++r) per_rep[r] = run_replication(sc, r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t r; (r = next.fetch_add(1)) < sc.reps;) per_rep[r] = run_replication(sc, r);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::vector<ResultRow> rows;
  for (auto& chunk : per_rep) rows.insert(rows.end(), chunk.begin(), chunk.end());
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.rep, a.method, a.rank) < std::tie(b.rep, b.method, b.rank);
  });
  return rows;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "scenario,rep,method,rank,ppv,npv,matched_class,size,n,score\n";
  std::ostringstream line;
  line.precision(10);
  for (const auto& r : rows) {
    line.str("");
    line << r.scenario << ',' << r.rep << ',' << to_string(r.method) << ',' << r.rank << ','
         << r.ppv << ',' << r.npv << ',' << r.matched_class << ',' << r.size << ',' << r.n << ','
         << r.score << '\n';
    out << line.str();
  }
}

Summary summarize(std::vector<double> values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.count);
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.sd = s.count > 1 ? std::sqrt(ss / static_cast<double>(s.count - 1)) : 0.0;
  return s;
}

void write_boxplot_svg(std::ostream& out, const std::vector<ResultRow>& rows) {
  // Panels: one per (scenario, metric); boxes: one per method present.
  std::vector<std::string> scenarios;
  std::vector<Method> methods;
  for (const auto& r : rows) {
    if (std::find(scenarios.begin(), scenarios.end(), r.scenario) == scenarios.end())
      scenarios.push_back(r.scenario);
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
  }
  std::sort(methods.begin(), methods.end());

  constexpr double panel_w = 260, panel_h = 200, margin = 40, box_w = 30;
  const double width = margin + 2 * (panel_w + margin);
  const double height = margin + static_cast<double>(std::max<std::size_t>(1, scenarios.size())) *
                                     (panel_h + 2 * margin);
  const char* colors[] = {"#4c72b0", "#dd8452", "#55a868", "#8172b3"};
  const char* short_names[] = {"O", "A", "M", "MT"};

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t si = 0; si < scenarios.size(); ++si) {
    for (int metric = 0; metric < 2; ++metric) {
      const double x0 = margin + metric * (panel_w + margin);
      const double y0 = margin + static_cast<double>(si) * (panel_h + 2 * margin);
      auto ypos = [&](double v) { return y0 + panel_h * (1.0 - v); };
      out << "<text x=\"" << x0 << "\" y=\"" << y0 - 8 << "\">" << scenarios[si] << " "
          << (metric == 0 ? "PPV" : "NPV") << "</text>\n";
      out << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << panel_w << "\" height=\""
          << panel_h << "\" fill=\"none\" stroke=\"#999\"/>\n";
      for (double tick : {0.0, 0.5, 1.0})
        out << "<text x=\"" << x0 - 24 << "\" y=\"" << ypos(tick) + 4 << "\">" << tick << "</text>\n";
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        std::vector<double> vals;
        for (const auto& r : rows)
          if (r.scenario == scenarios[si] && r.method == methods[mi])
            vals.push_back(metric == 0 ? r.ppv : r.npv);
        if (vals.empty()) continue;
        const Summary s = summarize(vals);
        const double cx = x0 + panel_w * (static_cast<double>(mi) + 0.5) / static_cast<double>(methods.size());
        const char* color = colors[static_cast<int>(methods[mi])];
        out << "<line x1=\"" << cx << "\" x2=\"" << cx << "\" y1=\"" << ypos(s.min) << "\" y2=\""
            << ypos(s.max) << "\" stroke=\"#333\"/>\n";
        out << "<rect x=\"" << cx - box_w / 2 << "\" y=\"" << ypos(s.q3) << "\" width=\"" << box_w
            << "\" height=\"" << std::max(0.5, ypos(s.q1) - ypos(s.q3)) << "\" fill=\"" << color
            << "\" stroke=\"#333\"/>\n";
        out << "<line x1=\"" << cx - box_w / 2 << "\" x2=\"" << cx + box_w / 2 << "\" y1=\""
            << ypos(s.median) << "\" y2=\"" << ypos(s.median) << "\" stroke=\"#000\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << cx - 4 << "\" y=\"" << y0 + panel_h + 14 << "\">"
            << short_names[static_cast<int>(methods[mi])] << "</text>\n";
      }
    }
  }
  out << "</svg>\n";
}

}  // namespace commex
