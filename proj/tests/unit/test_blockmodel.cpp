#include <doctest.h>

#include <cmath>
#include <random>

#include "commex/blockmodel.hpp"
#include "commex/error.hpp"
#include "oracles.hpp"

using namespace commex;

namespace {

const TwoBlock kTable{0.5, 0.05, 0.4};

BlockModelParams two_block(std::size_t n, std::size_t n1, double p11, double p12, double p22) {
  BlockModelParams prm;
  prm.n = n;
  prm.p = {{p11, p12}, {p12, p22}};
  prm.sizes = std::vector<std::size_t>{n1, n - n1};
  return prm;
}

}  // namespace

TEST_CASE("degenerate samplers") {
  BlockModelParams prm;
  prm.n = 5;
  prm.pi = {1.0};
  prm.p = {{0.0}};
  const SampledNetwork empty = sample_block_model(prm, 1);
  CHECK(empty.graph.edge_count() == 0);
  CHECK(empty.labels == std::vector<std::size_t>(5, 0));

  prm.p = {{1.0}};
  const SampledNetwork full = sample_block_model(prm, 1);
  CHECK(full.graph.edge_count() == 10);
  for (NodeId i = 0; i < 5; ++i) CHECK(full.graph.degree(i) == 4.0);
}

TEST_CASE("sampled graphs are symmetric, loop-free and reproducible") {
  const auto prm = two_block(200, 50, 0.3, 0.05, 0.1);
  const SampledNetwork a = sample_block_model(prm, 42);
  const SampledNetwork b = sample_block_model(prm, 42);
  const auto da = oracle::dense(a.graph);
  CHECK(da == oracle::dense(b.graph));
  for (NodeId i = 0; i < 200; ++i) {
    CHECK(da[i][i] == 0.0);
    for (NodeId j = 0; j < 200; ++j) CHECK(da[i][j] == da[j][i]);
  }
  CHECK(oracle::dense(sample_block_model(prm, 43).graph) != da);
  for (NodeId i = 0; i < 200; ++i) CHECK(a.labels[i] == (i < 50 ? 0u : 1u));
}

TEST_CASE("empirical block densities are within three standard errors") {
  // 20 draws of the (100, 900) design; pool the block-1 and cross pairs.
  const auto prm = two_block(1000, 100, 0.5, 0.05, 0.05);
  double inside = 0.0, across = 0.0;
  const double pairs_in = 100.0 * 99.0 / 2.0, pairs_x = 100.0 * 900.0;
  const int draws = 20;
  for (int d = 0; d < draws; ++d) {
    const SampledNetwork s = sample_block_model(prm, 1000 + d);
    for (NodeId i = 0; i < 100; ++i)
      for (NodeId j : s.graph.neighbors(i)) {
        if (j < 100 && i < j) inside += 1.0;
        if (j >= 100) across += 1.0;
      }
  }
  const double p_in = inside / (draws * pairs_in), p_x = across / (draws * pairs_x);
  CHECK(std::abs(p_in - 0.5) < 3.0 * std::sqrt(0.5 * 0.5 / (draws * pairs_in)));
  CHECK(std::abs(p_x - 0.05) < 3.0 * std::sqrt(0.05 * 0.95 / (draws * pairs_x)));
}

TEST_CASE("i.i.d. block labels follow pi") {
  BlockModelParams prm;
  prm.n = 20000;
  prm.pi = {0.3, 0.7};
  prm.p = {{0.0, 0.0}, {0.0, 0.0}};
  const SampledNetwork s = sample_block_model(prm, 5);
  double ones = 0.0;
  for (auto c : s.labels) ones += c == 0;
  CHECK(std::abs(ones / 20000.0 - 0.3) < 3.0 * std::sqrt(0.21 / 20000.0));
}

TEST_CASE("parameter validation") {
  auto prm = two_block(10, 3, 0.5, 0.1, 0.2);
  CHECK_NOTHROW(validate(prm));
  auto bad = prm;
  bad.p[0][1] = 0.2;
  CHECK_THROWS_AS(validate(bad), DomainError);  // asymmetric
  bad = prm;
  bad.rho = 3.0;
  CHECK_THROWS_AS(validate(bad), DomainError);  // 3 * 0.5 > 1
  CHECK_THROWS_AS(sample_block_model(bad, 1), DomainError);
  bad = prm;
  bad.sizes = std::vector<std::size_t>{3, 6};
  CHECK_THROWS_AS(validate(bad), DomainError);
  bad = prm;
  bad.sizes.reset();
  bad.pi = {0.5, 0.6};
  CHECK_THROWS_AS(validate(bad), DomainError);
  bad.pi = {0.5, 0.5};
  CHECK_NOTHROW(validate(bad));
  bad.p[1][1] = -0.1;
  CHECK_THROWS_AS(validate(bad), DomainError);
  CHECK(prm.expected_degree_scale() == 10.0);
}

TEST_CASE("consistency conditions") {
  CHECK(check_consistency_conditions(kTable));
  CHECK_FALSE(check_consistency_conditions({0.5, 0.5, 0.4}));
  CHECK_FALSE(check_consistency_conditions({0.3, 0.25, 0.1}));
  CHECK_FALSE(check_consistency_conditions({0.4, 0.1, 0.4}));
}

TEST_CASE("population criteria: closed-form values") {
  CHECK(population_original(1, 1, kTable) == doctest::Approx(0.45));
  CHECK(population_original(0, 0, kTable) == doctest::Approx(0.35));
  const TwoBlock flat{0.2, 0.2, 0.2};
  for (double t1 : {0.0, 0.3, 0.9})
    for (double t2 : {0.1, 0.5, 1.0}) CHECK(population_original(t1, t2, flat) == doctest::Approx(0.0).scale(1.0));

  CHECK(population_adjusted(1, 1, 0.3, kTable) == doctest::Approx(0.0945));
  for (double t : {0.0, 0.2, 0.6, 0.95}) {
    if (in_population_region(0.3, t, 0.3) && std::abs(0.3 + t - 1.0) > 1e-9)
      CHECK(population_adjusted(0.3, t, 0.3, kTable) == doctest::Approx(0.0).scale(1.0));
    if (in_population_region(t, 0.7, 0.3) && std::abs(t + 0.7 - 1.0) > 1e-9)
      CHECK(population_adjusted(t, 0.7, 0.3, kTable) == doctest::Approx(0.0).scale(1.0));
  }
  CHECK_THROWS_AS(population_adjusted(0.5, 0.5, 0.3, kTable), DomainError);
  CHECK_THROWS_AS(population_adjusted(0.1, 0.9, 0.3, kTable), DomainError);
  CHECK_THROWS_AS(population_original(0.1, 0.9, kTable, 0.3), DomainError);  // outside the region
  CHECK_THROWS_AS(population_original(1.2, 0.5, kTable), DomainError);
}

TEST_CASE("population criteria agree with the confusion-matrix oracle") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  while (checked < 500) {
    const double pi = 0.05 + 0.9 * u(rng);
    const TwoBlock p{u(rng), u(rng), u(rng)};
    const double t1 = u(rng), t2 = u(rng);
    if (!in_population_region(t1, t2, pi) || std::abs(t1 + t2 - 1.0) < 1e-3) continue;
    const double s = (t2 - (1.0 - pi)) / (t1 + t2 - 1.0);
    if (s <= 1e-6 || s >= 1.0 - 1e-6) continue;  // S or S^c empty
    CHECK(population_original(t1, t2, p, pi) ==
          doctest::Approx(oracle::population_from_confusion(t1, t2, pi, p.p11, p.p12, p.p22, false)).epsilon(1e-10));
    CHECK(population_adjusted(t1, t2, pi, p) ==
          doctest::Approx(oracle::population_from_confusion(t1, t2, pi, p.p11, p.p12, p.p22, true)).epsilon(1e-10));
    ++checked;
  }
}

TEST_CASE("interior stationary point") {
  const auto a = interior_stationary_point(kTable);
  CHECK(a.t1 == doctest::Approx(0.4375));
  CHECK(a.t2 == doctest::Approx(0.5625));
  const auto b = interior_stationary_point({0.3, 0.1, 0.3});
  CHECK(b.t1 == doctest::Approx(0.5));
  CHECK(b.t2 == doctest::Approx(0.5));
  const auto c = interior_stationary_point({0.5, 0.05, 0.05});
  CHECK(c.t1 == doctest::Approx(0.0).scale(1.0));
  CHECK(c.t2 == doctest::Approx(1.0));
  CHECK_THROWS_AS(interior_stationary_point({0.3, 0.2, 0.1}), DomainError);
}

TEST_CASE("grid argmax") {
  for (auto crit : {PopulationCriterion::original, PopulationCriterion::adjusted}) {
    const GridArgmax g = population_grid_argmax(crit, 0.3, kTable, 0.01);
    CHECK(g.t1 == 1.0);
    CHECK(g.t2 == 1.0);
    CHECK(g.consistent);
    CHECK_FALSE(g.degenerate);
  }
  const GridArgmax flat = population_grid_argmax(PopulationCriterion::original, 0.3, {0.2, 0.2, 0.2}, 0.05);
  CHECK(flat.degenerate);
  const GridArgmax bad = population_grid_argmax(PopulationCriterion::original, 0.3, {0.1, 0.2, 0.3}, 0.05);
  CHECK_FALSE(bad.consistent);
  CHECK_THROWS_AS(population_grid_argmax(PopulationCriterion::original, 0.3, kTable, 0.2), DomainError);
  CHECK_THROWS_AS(population_grid_argmax(PopulationCriterion::original, 0.0, kTable, 0.01), DomainError);
}

TEST_CASE("the bracket term has its maxima only at (0,0) and (1,1)") {
  for (double pi : {0.1, 0.3, 0.5}) {
    double best = -1e300;
    std::vector<std::pair<double, double>> at;
    for (int i = 0; i <= 100; ++i)
      for (int j = 0; j <= 100; ++j) {
        const double t1 = i / 100.0, t2 = j / 100.0;
        if (!in_population_region(t1, t2, pi)) continue;
        const double g = t1 * (t1 + t2 - 1.0) - 0.5 * (t1 + t2);
        if (g > best + 1e-12) {
          best = g;
          at.clear();
        }
        if (std::abs(g - best) <= 1e-12) at.emplace_back(t1, t2);
      }
    CHECK(at == std::vector<std::pair<double, double>>{{0.0, 0.0}, {1.0, 1.0}});
  }
}
