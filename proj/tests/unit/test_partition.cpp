#include <doctest.h>

#include <cmath>
#include <random>

#include "commex/error.hpp"
#include "commex/graph.hpp"
#include "commex/partition.hpp"
#include "oracles.hpp"

using namespace commex;

namespace {

// Leading eigenpair of the modularity matrix restricted to vectors orthogonal to
// the all-ones vector, from a full dense eigendecomposition. Returns false when the
// leading eigenvalue is not separated from the next one.
bool dense_leading(const Graph& g, double& value, std::vector<double>& vec) {
  const auto b = oracle::modularity_matrix(oracle::dense(g));
  const auto eig = oracle::jacobi(b);
  const std::size_t n = g.size();
  std::vector<std::size_t> candidates;
  for (std::size_t k = eig.values.size(); k-- > 0;) {
    double sum = 0.0;
    for (double x : eig.vectors[k]) sum += x;
    if (std::abs(sum) > 1e-6 * std::sqrt(static_cast<double>(n))) continue;  // constant direction
    candidates.push_back(k);
  }
  if (candidates.size() < 2) return false;
  value = eig.values[candidates[0]];
  vec = eig.vectors[candidates[0]];
  return value - eig.values[candidates[1]] > 1e-3;
}

}  // namespace

TEST_CASE("Jacobi oracle reproduces B v = lambda v") {
  const Graph g = oracle::erdos_renyi(7, 0.5, 1);
  const auto b = oracle::modularity_matrix(oracle::dense(g));
  const auto eig = oracle::jacobi(b);
  for (std::size_t k = 0; k < 7; ++k)
    for (std::size_t i = 0; i < 7; ++i) {
      double bv = 0.0;
      for (std::size_t j = 0; j < 7; ++j) bv += b[i][j] * eig.vectors[k][j];
      CHECK(bv == doctest::Approx(eig.values[k] * eig.vectors[k][i]).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("two triangles joined by an edge are separated") {
  const Graph g = oracle::clique_union(2, 3, true);
  const SpectralSplit s = leading_eigenvector_split(g);
  for (NodeId i = 1; i < 3; ++i) CHECK(s.labeling.in_s(i) == s.labeling.in_s(0));
  for (NodeId i = 3; i < 6; ++i) CHECK(s.labeling.in_s(i) != s.labeling.in_s(0));
  CHECK(s.labeling.in_s(0));  // first component positive

  double value = 0.0;
  std::vector<double> vec;
  REQUIRE(dense_leading(g, value, vec));
  CHECK(s.eigval_estimate == doctest::Approx(value).epsilon(1e-6));
  const double flip = vec[0] > 0 ? 1.0 : -1.0;
  for (NodeId i = 0; i < 6; ++i) CHECK(s.eigvec[i] == doctest::Approx(flip * vec[i]).epsilon(1e-6));
}

TEST_CASE("a single edge splits into opposite halves of equal magnitude") {
  const std::vector<EdgeRecord> e{{0, 1}};
  const SpectralSplit s = leading_eigenvector_split(Graph::from_edges(2, e));
  CHECK(s.eigvec[0] == doctest::Approx(-s.eigvec[1]));
  CHECK(std::abs(s.eigvec[0]) == doctest::Approx(std::sqrt(0.5)));
  CHECK(s.labeling.in_s(0) != s.labeling.in_s(1));
}

TEST_CASE("spectral sign pattern matches a dense eigendecomposition for n <= 8") {
  std::mt19937_64 rng(2);
  std::size_t compared = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 4 + rng() % 5;
    const Graph g = oracle::erdos_renyi(n, 0.45, rng(), trial % 3 == 0);
    if (g.total_weight() == 0.0) continue;
    double value = 0.0;
    std::vector<double> vec;
    if (!dense_leading(g, value, vec)) continue;
    const SpectralSplit s = leading_eigenvector_split(g);
    CHECK(s.eigval_estimate == doctest::Approx(value).epsilon(1e-6));
    double dot = 0.0;
    for (NodeId i = 0; i < n; ++i) dot += s.eigvec[i] * vec[i];
    const double flip = dot > 0 ? 1.0 : -1.0;
    for (NodeId i = 0; i < n; ++i) {
      CHECK(s.eigvec[i] == doctest::Approx(flip * vec[i]).epsilon(1e-6).scale(1.0));
      if (std::abs(vec[i]) > 1e-6) CHECK(s.labeling.in_s(i) == (flip * vec[i] > 0));
    }
    // Residual of the returned pair.
    const auto b = oracle::modularity_matrix(oracle::dense(g));
    double residual = 0.0;
    for (NodeId i = 0; i < n; ++i) {
      double bx = 0.0;
      for (NodeId j = 0; j < n; ++j) bx += b[i][j] * s.eigvec[j];
      residual = std::max(residual, std::abs(bx - s.eigval_estimate * s.eigvec[i]));
    }
    CHECK(residual < 1e-7);
    ++compared;
  }
  CHECK(compared >= 20);
}

TEST_CASE("power iteration failures") {
  CHECK_THROWS_AS(leading_eigenvector_split(Graph::from_edges(5, {})), UndefinedScoreError);
  const Graph g = oracle::erdos_renyi(30, 0.2, 9);
  try {
    leading_eigenvector_split(g, 1e-14, 2);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.last_iterate().size() == 30);
  }
}

TEST_CASE("two-way modularity optimum") {
  SUBCASE("two disjoint edges") {
    const std::vector<EdgeRecord> e{{0, 1}, {2, 3}};
    const Graph g = Graph::from_edges(4, e);
    const SearchResult r = modularity_two_way(g, TabuConfig{});
    CHECK(r.best_score == doctest::Approx(0.5));
    CHECK(r.best_labeling.in_s(0) == r.best_labeling.in_s(1));
    CHECK(r.best_labeling.in_s(2) == r.best_labeling.in_s(3));
    CHECK(r.best_labeling.in_s(0) != r.best_labeling.in_s(2));
  }
  SUBCASE("complete graph: no split helps") {
    const Graph g = oracle::clique_union(1, 4, false);
    const auto a = oracle::dense(g);
    double best = 0.0;  // the all-one labeling
    for (std::uint64_t m = 1; m < 15; ++m) best = std::max(best, oracle::modularity(a, oracle::signs_of(m, 4)));
    CHECK(best == doctest::Approx(0.0));
    const SearchResult r = modularity_two_way(g, TabuConfig{});
    CHECK(r.best_score == doctest::Approx(0.0).scale(1.0));
    CHECK(r.best_labeling.count() % 4 == 0);
  }
  SUBCASE("random graphs against enumeration") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      const std::size_t n = 6 + seed % 6;
      const Graph g = oracle::erdos_renyi(n, 0.35, 900 + seed);
      if (g.total_weight() == 0.0) continue;
      const auto a = oracle::dense(g);
      double best = 0.0;
      for (std::uint64_t m = 1; m < (std::uint64_t{1} << n) - 1; ++m)
        best = std::max(best, oracle::modularity(a, oracle::signs_of(m, n)));
      const SearchResult r = modularity_two_way(g, TabuConfig{});
      CHECK(r.best_score == doctest::Approx(best).epsilon(1e-9));
      CHECK(r.best_score >= modularity_score(g, leading_eigenvector_split(g).labeling) - 1e-12);
    }
  }
}

TEST_CASE("sequential modularity partition") {
  SUBCASE("two disjoint K5s") {
    const Graph g = oracle::clique_union(2, 5, false);
    const KWayLabeling p = sequential_modularity_partition(g, TabuConfig{});
    CHECK(p.k == 2);
    for (NodeId i = 0; i < 5; ++i) CHECK(p.assignment[i] == p.assignment[0]);
    for (NodeId i = 5; i < 10; ++i) CHECK(p.assignment[i] == p.assignment[5]);
    CHECK(p.assignment[0] != p.assignment[5]);
  }
  SUBCASE("K6 stays whole") {
    const Graph g = oracle::clique_union(1, 6, false);
    const auto a = oracle::dense(g);
    for (std::uint64_t m = 1; m < 63; ++m) CHECK(oracle::modularity(a, oracle::signs_of(m, 6)) < 0.0);
    const KWayLabeling p = sequential_modularity_partition(g, TabuConfig{});
    CHECK(p.k == 1);
  }
  SUBCASE("max_k caps the number of communities and Q grows with K") {
    const Graph g = oracle::clique_union(4, 5, true);
    const KWayLabeling one = sequential_modularity_partition(g, TabuConfig{}, 1);
    CHECK(one.k == 1);
    CHECK(one.assignment == std::vector<std::size_t>(20, 0));
    double previous = modularity_score(g, one.assignment);
    for (std::size_t k = 2; k <= 4; ++k) {
      const KWayLabeling p = sequential_modularity_partition(g, TabuConfig{}, k);
      CHECK(p.k == k);
      const double q = modularity_score(g, p.assignment);
      CHECK(q >= previous);
      previous = q;
    }
    const KWayLabeling free = sequential_modularity_partition(g, TabuConfig{});
    CHECK(free.k == 4);
    for (NodeId c = 0; c < 4; ++c)
      for (NodeId i = 1; i < 5; ++i) CHECK(free.assignment[c * 5 + i] == free.assignment[c * 5]);
  }
}

TEST_CASE("karate club: the spectral split reproduces the factions") {
  const Graph g = load_edge_list_file(COMMEX_DATA_DIR "/karate.edges").graph;
  const TrueLabels t = load_labels_file(COMMEX_DATA_DIR "/karate.labels", g);
  const SpectralSplit s = leading_eigenvector_split(g);
  for (NodeId i = 0; i < g.size(); ++i)
    CHECK((s.labeling.in_s(i) == s.labeling.in_s(0)) == (t.classes[i] == t.classes[0]));
}
