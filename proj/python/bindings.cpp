#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "commex/blockmodel.hpp"
#include "commex/criteria.hpp"
#include "commex/error.hpp"
#include "commex/evaluation.hpp"
#include "commex/graph.hpp"
#include "commex/harness.hpp"
#include "commex/partition.hpp"
#include "commex/pipeline.hpp"
#include "commex/tabu.hpp"

namespace py = pybind11;
using namespace commex;

namespace {

using Edge = std::tuple<NodeId, NodeId, double>;

Graph graph_from_edges(std::size_t n, const std::vector<py::tuple>& edges,
                       std::vector<std::string> labels) {
  std::vector<EdgeRecord> records;
  records.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.size() != 2 && e.size() != 3) throw DomainError("edges must be (u, v) or (u, v, w) tuples");
    EdgeRecord r;
    r.u = e[0].cast<NodeId>();
    r.v = e[1].cast<NodeId>();
    if (e.size() == 3) r.w = e[2].cast<double>();
    records.push_back(r);
  }
  return Graph::from_edges(n, records, std::move(labels));
}

std::vector<Edge> edge_list(const Graph& g) {
  std::vector<Edge> out;
  for (NodeId i = 0; i < g.size(); ++i) {
    const auto nb = g.neighbors(i);
    const auto w = g.weights(i);
    for (std::size_t k = 0; k < nb.size(); ++k)
      if (i < nb[k]) out.emplace_back(i, nb[k], w[k]);
  }
  return out;
}

TwoWayLabeling labeling_of(const Graph& g, const std::vector<NodeId>& members) {
  for (NodeId v : members)
    if (v >= g.size()) throw DomainError("node id " + std::to_string(v) + " out of range");
  return TwoWayLabeling::from_members(g.size(), members);
}

struct PySearchResult {
  std::vector<NodeId> members;
  double score = 0.0;
  std::vector<double> trace;
  std::vector<NodeId> moves;
  std::size_t run = 0;
};

PySearchResult to_py(const SearchResult& r) {
  return {r.best_labeling.members(), r.best_score, r.trace, r.moves, r.run};
}

std::vector<std::vector<double>> rows_of(const Table& t) {
  std::vector<std::vector<double>> out(t.rows, std::vector<double>(t.cols));
  for (std::size_t r = 0; r < t.rows; ++r)
    for (std::size_t c = 0; c < t.cols; ++c) out[r][c] = t(r, c);
  return out;
}

}  // namespace

PYBIND11_MODULE(_commex, m) {
  m.doc() = "Community extraction by tabu search over two-way labelings";

  // Exceptions
  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  static py::exception<ParseError> parse_error(m, "ParseError", error.ptr());
  static py::exception<DuplicateEdgeError> duplicate_edge_error(m, "DuplicateEdgeError", parse_error.ptr());
  static py::exception<DomainError> domain_error(m, "DomainError", error.ptr());
  static py::exception<InfeasibleError> infeasible_error(m, "InfeasibleError", error.ptr());
  static py::exception<UndefinedScoreError> undefined_score_error(m, "UndefinedScoreError", error.ptr());
  static py::exception<ConvergenceError> convergence_error(m, "ConvergenceError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConvergenceError& e) {
      py::object exc = py::handle(convergence_error.ptr())(e.what());
      exc.attr("last_iterate") = py::cast(e.last_iterate());
      PyErr_SetObject(convergence_error.ptr(), exc.ptr());
    } catch (const DuplicateEdgeError& e) {
      py::set_error(duplicate_edge_error, e.what());
    } catch (const ParseError& e) {
      py::set_error(parse_error, e.what());
    } catch (const DomainError& e) {
      py::set_error(domain_error, e.what());
    } catch (const InfeasibleError& e) {
      py::set_error(infeasible_error, e.what());
    } catch (const UndefinedScoreError& e) {
      py::set_error(undefined_score_error, e.what());
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  // Graphs
  py::class_<Graph>(m, "Graph")
      .def(py::init(&graph_from_edges), py::arg("n"), py::arg("edges"),
           py::arg("labels") = std::vector<std::string>{},
           "Undirected weighted graph on nodes 0..n-1 from (u, v) or (u, v, w) tuples.")
      .def_property_readonly("n", &Graph::size)
      .def_property_readonly("edge_count", &Graph::edge_count)
      .def_property_readonly("total_weight", &Graph::total_weight)
      .def_property_readonly("labels", &Graph::labels)
      .def_property_readonly("degrees", [](const Graph& g) { return degree_vector(g); })
      .def("degree", [](const Graph& g, NodeId i) {
        if (i >= g.size()) throw py::index_error("node id out of range");
        return g.degree(i);
      })
      .def("weight", [](const Graph& g, NodeId i, NodeId j) {
        if (i >= g.size() || j >= g.size()) throw py::index_error("node id out of range");
        return g.weight(i, j);
      })
      .def("neighbors", [](const Graph& g, NodeId i) {
        if (i >= g.size()) throw py::index_error("node id out of range");
        const auto nb = g.neighbors(i);
        return std::vector<NodeId>(nb.begin(), nb.end());
      })
      .def("edges", &edge_list, "List of (u, v, w) with u < v.")
      .def("induced", [](const Graph& g, const std::vector<NodeId>& nodes) { return g.induced(nodes); })
      .def("__len__", &Graph::size)
      .def("__repr__", [](const Graph& g) {
        return "<Graph n=" + std::to_string(g.size()) + " edges=" + std::to_string(g.edge_count()) + ">";
      });

  m.def(
      "load_edge_list",
      [](const std::string& path, bool directed) {
        auto loaded = load_edge_list_file(path, directed ? DirectedMode::average_directed : DirectedMode::undirected);
        return py::make_tuple(std::move(loaded.graph), loaded.dropped_self_loops);
      },
      py::arg("path"), py::arg("directed") = false,
      "Read an edge-list file; returns (graph, dropped_self_loops).");
  m.def(
      "parse_edge_list",
      [](const std::string& text, bool directed) {
        std::istringstream in(text);
        auto loaded = load_edge_list(in, directed ? DirectedMode::average_directed : DirectedMode::undirected);
        return py::make_tuple(std::move(loaded.graph), loaded.dropped_self_loops);
      },
      py::arg("text"), py::arg("directed") = false);
  m.def(
      "load_labels",
      [](const std::string& path, const Graph& g) {
        auto t = load_labels_file(path, g);
        return py::make_tuple(std::move(t.classes), std::move(t.class_names));
      },
      py::arg("path"), py::arg("graph"), "Read a label file; returns (classes, class_names).");

  // Criteria
  py::enum_<Criterion>(m, "Criterion")
      .value("original", Criterion::original)
      .value("adjusted", Criterion::adjusted)
      .value("modularity2", Criterion::modularity2);

  py::class_<SubsetStats>(m, "SubsetStats")
      .def_readonly("size", &SubsetStats::size)
      .def_readonly("o", &SubsetStats::o)
      .def_readonly("b", &SubsetStats::b)
      .def("__repr__", [](const SubsetStats& s) {
        return "<SubsetStats size=" + std::to_string(s.size) + " o=" + std::to_string(s.o) +
               " b=" + std::to_string(s.b) + ">";
      });

  m.def("subset_stats", [](const Graph& g, const std::vector<NodeId>& members) {
    return subset_stats(g, labeling_of(g, members));
  });
  m.def(
      "score",
      [](const Graph& g, const std::vector<NodeId>& members, Criterion c) {
        return criterion_score(c, subset_stats(g, labeling_of(g, members)), g.size(), g.total_weight());
      },
      py::arg("graph"), py::arg("members"), py::arg("criterion") = Criterion::adjusted,
      "Criterion value of the community given by its member ids.");
  m.def(
      "modularity",
      [](const Graph& g, const std::vector<std::size_t>& communities) {
        if (communities.size() != g.size()) throw DomainError("one community id per node is required");
        return modularity_score(g, communities);
      },
      py::arg("graph"), py::arg("communities"), "Modularity of a partition given one community id per node.");
  m.def("cut_scores", [](const Graph& g, const std::vector<NodeId>& members) {
    const CutScores c = cut_scores(g, labeling_of(g, members));
    return py::dict(py::arg("cut") = c.cut, py::arg("ratio_cut") = c.ratio_cut,
                    py::arg("normalized_cut") = c.normalized_cut);
  });

  // Tabu search
  py::class_<TabuConfig>(m, "TabuConfig")
      .def(py::init<>())
      .def_readwrite("tenure", &TabuConfig::tenure)
      .def_readwrite("max_iters", &TabuConfig::max_iters)
      .def_readwrite("restarts", &TabuConfig::restarts)
      .def_readwrite("seed", &TabuConfig::seed)
      .def_readwrite("min_side", &TabuConfig::min_side)
      .def_readwrite("threads", &TabuConfig::threads)
      .def_readwrite("record_trace", &TabuConfig::record_trace)
      .def_readwrite("record_moves", &TabuConfig::record_moves)
      .def("tenure_for", &TabuConfig::tenure_for)
      .def("iterations_for", &TabuConfig::iterations_for);

  py::class_<PySearchResult>(m, "SearchResult")
      .def_readonly("members", &PySearchResult::members)
      .def_readonly("score", &PySearchResult::score)
      .def_readonly("trace", &PySearchResult::trace)
      .def_readonly("moves", &PySearchResult::moves)
      .def_readonly("run", &PySearchResult::run);

  m.def(
      "tabu_maximize",
      [](const Graph& g, Criterion c, const std::vector<NodeId>& init, const std::vector<NodeId>& order,
         const TabuConfig& cfg) {
        const TwoWayLabeling s0 = labeling_of(g, init);
        py::gil_scoped_release release;
        return to_py(tabu_maximize(g, c, s0, order, cfg));
      },
      py::arg("graph"), py::arg("criterion"), py::arg("init"), py::arg("order"),
      py::arg("config") = TabuConfig{});
  m.def(
      "multi_start",
      [](const Graph& g, Criterion c, const TabuConfig& cfg) {
        py::gil_scoped_release release;
        return to_py(multi_start(g, c, cfg));
      },
      py::arg("graph"), py::arg("criterion") = Criterion::adjusted, py::arg("config") = TabuConfig{});
  m.def("derive_seed", &derive_seed);

  // Extraction pipeline
  py::class_<ExtractedCommunity>(m, "ExtractedCommunity")
      .def_readonly("rank", &ExtractedCommunity::rank)
      .def_readonly("members", &ExtractedCommunity::members)
      .def_readonly("score", &ExtractedCommunity::score);
  py::class_<ExtractionResult>(m, "ExtractionResult")
      .def_readonly("communities", &ExtractionResult::communities)
      .def_readonly("background", &ExtractionResult::background)
      .def_readonly("criterion", &ExtractionResult::criterion)
      .def("to_json", [](const ExtractionResult& r, const Graph& g) {
        std::ostringstream out;
        write_extraction_json(out, g, r);
        return out.str();
      });
  m.def(
      "extract_one",
      [](const Graph& g, const std::vector<NodeId>& active, Criterion c, const TabuConfig& cfg) {
        Extraction e;
        {
          py::gil_scoped_release release;
          e = extract_one(g, active, c, cfg);
        }
        return py::make_tuple(e.community, e.score);
      },
      py::arg("graph"), py::arg("active"), py::arg("criterion") = Criterion::adjusted,
      py::arg("config") = TabuConfig{}, "Best community among the active nodes; returns (members, score).");
  m.def(
      "extract_sequence",
      [](const Graph& g, Criterion c, const TabuConfig& cfg, std::size_t min_size,
         std::optional<std::size_t> max_communities) {
        py::gil_scoped_release release;
        return extract_sequence(g, c, cfg, StopRule{min_size, max_communities});
      },
      py::arg("graph"), py::arg("criterion") = Criterion::adjusted, py::arg("config") = TabuConfig{},
      py::arg("min_size") = 5, py::arg("max_communities") = py::none());
  m.def(
      "read_extraction_json",
      [](const std::string& text, const Graph& g) {
        std::istringstream in(text);
        return read_extraction_json(in, g);
      },
      py::arg("text"), py::arg("graph"));

  // Modularity partitioning
  py::class_<SpectralSplit>(m, "SpectralSplit")
      .def_readonly("eigvec", &SpectralSplit::eigvec)
      .def_readonly("eigval_estimate", &SpectralSplit::eigval_estimate)
      .def_readonly("iterations", &SpectralSplit::iterations)
      .def_property_readonly("members", [](const SpectralSplit& s) { return s.labeling.members(); });
  m.def("leading_eigenvector_split", &leading_eigenvector_split, py::arg("graph"), py::arg("tol") = 1e-8,
        py::arg("max_iter") = 10000, py::call_guard<py::gil_scoped_release>());
  m.def(
      "modularity_two_way",
      [](const Graph& g, const TabuConfig& cfg) {
        py::gil_scoped_release release;
        return to_py(modularity_two_way(g, cfg));
      },
      py::arg("graph"), py::arg("config") = TabuConfig{});
  m.def(
      "sequential_modularity_partition",
      [](const Graph& g, const TabuConfig& cfg, std::optional<std::size_t> max_k) {
        KWayLabeling k;
        {
          py::gil_scoped_release release;
          k = sequential_modularity_partition(g, cfg, max_k);
        }
        return py::make_tuple(k.assignment, k.k);
      },
      py::arg("graph"), py::arg("config") = TabuConfig{}, py::arg("max_k") = py::none(),
      "Returns (assignment, k).");

  // Block model
  py::class_<BlockModelParams>(m, "BlockModelParams")
      .def(py::init([](std::size_t n, std::vector<std::vector<double>> p, std::vector<double> pi,
                       std::optional<std::vector<std::size_t>> sizes, double rho) {
             BlockModelParams prm;
             prm.n = n;
             prm.p = std::move(p);
             prm.pi = std::move(pi);
             prm.sizes = std::move(sizes);
             prm.rho = rho;
             return prm;
           }),
           py::arg("n"), py::arg("p"), py::arg("pi") = std::vector<double>{}, py::arg("sizes") = py::none(),
           py::arg("rho") = 1.0)
      .def_readwrite("n", &BlockModelParams::n)
      .def_readwrite("p", &BlockModelParams::p)
      .def_readwrite("pi", &BlockModelParams::pi)
      .def_readwrite("sizes", &BlockModelParams::sizes)
      .def_readwrite("rho", &BlockModelParams::rho)
      .def("validate", [](const BlockModelParams& p) { validate(p); });
  m.def(
      "sample_block_model",
      [](const BlockModelParams& prm, std::uint64_t seed) {
        SampledNetwork s = sample_block_model(prm, seed);
        return py::make_tuple(std::move(s.graph), std::move(s.labels));
      },
      py::arg("params"), py::arg("seed"), "Returns (graph, true labels).");

  py::class_<TwoBlock>(m, "TwoBlock")
      .def(py::init([](double p11, double p12, double p22) { return TwoBlock{p11, p12, p22}; }),
           py::arg("p11"), py::arg("p12"), py::arg("p22"))
      .def_readwrite("p11", &TwoBlock::p11)
      .def_readwrite("p12", &TwoBlock::p12)
      .def_readwrite("p22", &TwoBlock::p22);
  py::enum_<PopulationCriterion>(m, "PopulationCriterion")
      .value("original", PopulationCriterion::original)
      .value("adjusted", PopulationCriterion::adjusted);
  py::class_<GridArgmax>(m, "GridArgmax")
      .def_readonly("t1", &GridArgmax::t1)
      .def_readonly("t2", &GridArgmax::t2)
      .def_readonly("value", &GridArgmax::value)
      .def_readonly("consistent", &GridArgmax::consistent)
      .def_readonly("degenerate", &GridArgmax::degenerate)
      .def_readonly("points", &GridArgmax::points);
  m.def("check_consistency_conditions", &check_consistency_conditions);
  m.def("in_population_region", &in_population_region);
  m.def("population_original", &population_original, py::arg("t1"), py::arg("t2"), py::arg("p"),
        py::arg("pi") = py::none());
  m.def("population_adjusted", &population_adjusted, py::arg("t1"), py::arg("t2"), py::arg("pi"), py::arg("p"));
  m.def("interior_stationary_point", [](const TwoBlock& p) {
    const StationaryPoint s = interior_stationary_point(p);
    return py::make_tuple(s.t1, s.t2);
  });
  m.def("population_grid_argmax", &population_grid_argmax, py::arg("criterion"), py::arg("pi"), py::arg("p"),
        py::arg("step") = 0.01);

  // Evaluation
  py::class_<MatchScore>(m, "MatchScore")
      .def_readonly("ppv", &MatchScore::ppv)
      .def_readonly("npv", &MatchScore::npv)
      .def_readonly("matched_class", &MatchScore::matched_class)
      .def_readonly("matched_background", &MatchScore::matched_background);
  m.def(
      "match_and_score",
      [](const std::vector<NodeId>& extracted, const std::vector<std::size_t>& truth,
         std::optional<std::size_t> background) {
        for (NodeId v : extracted)
          if (v >= truth.size()) throw DomainError("node id " + std::to_string(v) + " out of range");
        return match_and_score(extracted, truth, background);
      },
      py::arg("extracted"), py::arg("true_labels"), py::arg("background_label") = py::none());
  m.def("confusion_matrix", [](const std::vector<std::size_t>& proposed, const std::vector<std::size_t>& truth) {
    return rows_of(confusion_matrix(proposed, truth));
  });
  m.def("block_edge_counts", [](const Graph& g, const std::vector<std::size_t>& proposed) {
    if (proposed.size() != g.size()) throw DomainError("one block id per node is required");
    return rows_of(block_edge_counts(g, proposed));
  });

  // Simulation harness
  py::class_<Scenario>(m, "Scenario")
      .def_static("preset", [](const std::string& design) { return make_scenario(parse_design(design)); })
      .def_static("from_json", [](const std::string& text) { return scenario_from_json(nlohmann::json::parse(text)); })
      .def_readwrite("id", &Scenario::id)
      .def_readwrite("params", &Scenario::params)
      .def_readwrite("background_class", &Scenario::background_class)
      .def_readwrite("reps", &Scenario::reps)
      .def_readwrite("seed", &Scenario::seed)
      .def_readwrite("tabu", &Scenario::tabu)
      .def_property(
          "methods",
          [](const Scenario& s) {
            std::vector<std::string> out;
            for (Method mth : s.methods) out.emplace_back(to_string(mth));
            return out;
          },
          [](Scenario& s, const std::vector<std::string>& names) {
            std::vector<Method> methods;
            for (const auto& n : names) methods.push_back(parse_method(n));
            s.methods = std::move(methods);
          });
  py::class_<ResultRow>(m, "ResultRow")
      .def_readonly("scenario", &ResultRow::scenario)
      .def_readonly("rep", &ResultRow::rep)
      .def_property_readonly("method", [](const ResultRow& r) { return std::string(to_string(r.method)); })
      .def_readonly("rank", &ResultRow::rank)
      .def_readonly("ppv", &ResultRow::ppv)
      .def_readonly("npv", &ResultRow::npv)
      .def_readonly("matched_class", &ResultRow::matched_class)
      .def_readonly("size", &ResultRow::size)
      .def_readonly("n", &ResultRow::n)
      .def_readonly("score", &ResultRow::score);
  m.def("run_scenario", &run_scenario, py::arg("scenario"), py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("to_csv", [](const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    write_csv(out, rows);
    return out.str();
  });
}
