#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "pdc/forest.hpp"
#include "pdc/rng.hpp"

using namespace pdc;

namespace {

struct Dataset {
  std::vector<double> values;
  std::vector<double> targets;
  std::size_t n_cols = 1;

  DataView view() const { return DataView{values, n_cols, targets}; }
};

Dataset random_counts(std::uint64_t seed, std::size_t n, std::size_t cols) {
  Dataset d;
  d.n_cols = cols;
  Rng rng = make_rng(seed);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < cols; ++c) d.values.push_back(draw_unit(rng) * 20.0);
    d.targets.push_back(double(draw_index(rng, 12)));
  }
  return d;
}

ForestParams small_params(std::uint64_t seed, int trees) {
  ForestParams p;
  p.n_estimators = trees;
  p.base_seed = seed;
  p.tree.max_depth = 4;
  p.tree.min_samples_split = 4;
  p.tree.min_samples_leaf = 2;
  return p;
}

// The weight of training sample i at x, straight from the definition:
// average over trees of (multiplicity in the reached leaf / leaf size).
std::vector<double> weights_by_hand(const ForestModel& m, std::span<const double> x) {
  std::vector<double> w(m.train_targets.size(), 0.0);
  for (const auto& t : m.trees) {
    const auto& members = t.nodes[std::size_t(t.leaf_index(x))].members;
    for (int r : members) w[std::size_t(r)] += 1.0 / double(members.size());
  }
  for (auto& v : w) v /= double(m.trees.size());
  return w;
}

}  // namespace

TEST_CASE("forest weights match the definition and sum to one") {
  Dataset d = random_counts(31, 80, 3);
  ForestModel m = fit_forest(d.view(), small_params(9, 12), ForestKind::Qrf);
  Rng rng = make_rng(55);
  for (int probe = 0; probe < 25; ++probe) {
    std::vector<double> x = {draw_unit(rng) * 20, draw_unit(rng) * 20, draw_unit(rng) * 20};
    auto w = forest_weights(m, x);
    auto oracle = weights_by_hand(m, x);
    REQUIRE(w.size() == oracle.size());
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      CHECK(w[i] == doctest::Approx(oracle[i]).epsilon(1e-12));
      total += w[i];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("point forecast equals the weighted target sum") {
  Dataset d = random_counts(3, 60, 2);
  ForestModel m = fit_forest(d.view(), small_params(1, 10), ForestKind::Rf);
  Rng rng = make_rng(8);
  for (int probe = 0; probe < 25; ++probe) {
    std::vector<double> x = {draw_unit(rng) * 20, draw_unit(rng) * 20};
    auto w = forest_weights(m, x);
    double dot = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) dot += w[i] * d.targets[i];
    CHECK(forest_point(m, x) == doctest::Approx(dot).epsilon(1e-9));
  }
}

TEST_CASE("single unsplittable tree spreads weight evenly") {
  Dataset d{{7.0, 7.0}, {1.0, 2.0}, 1};
  ForestParams p = small_params(0, 1);
  p.bootstrap = false;
  p.tree.min_samples_leaf = 1;
  p.tree.min_samples_split = 2;
  ForestModel m = fit_forest(d.view(), p, ForestKind::Qrf);
  std::vector<double> x = {7.0};
  auto w = forest_weights(m, x);
  CHECK(w[0] == doctest::Approx(0.5));
  CHECK(w[1] == doctest::Approx(0.5));
  // Lower empirical quantile: 0.5 of the mass sits on the smaller target.
  CHECK(forest_quantile(m, x, 0.5) == 1.0);
  CHECK(forest_quantile(m, x, 0.51) == 2.0);
  CHECK(forest_quantile(m, x, 0.9) == 2.0);
  CHECK(forest_point(m, x) == doctest::Approx(1.5));
}

TEST_CASE("quantiles are monotone, live in the training multiset, and top out") {
  Dataset d = random_counts(17, 100, 3);
  ForestModel m = fit_forest(d.view(), small_params(23, 15), ForestKind::Qrf);
  std::vector<double> qs;
  for (int i = 1; i <= 19; ++i) qs.push_back(double(i) / 20.0);
  double top = *std::max_element(d.targets.begin(), d.targets.end());
  Rng rng = make_rng(99);
  for (int probe = 0; probe < 20; ++probe) {
    std::vector<double> x = {draw_unit(rng) * 20, draw_unit(rng) * 20, draw_unit(rng) * 20};
    auto vals = forest_quantiles(m, x, qs);
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (i > 0) CHECK(vals[i] >= vals[i - 1]);
      CHECK(std::find(d.targets.begin(), d.targets.end(), vals[i]) != d.targets.end());
    }
    CHECK(forest_quantile(m, x, 0.999999) == top);
  }
}

TEST_CASE("quantile queries need a qrf") {
  Dataset d = random_counts(2, 30, 2);
  ForestModel rf = fit_forest(d.view(), small_params(4, 3), ForestKind::Rf);
  std::vector<double> x = {1.0, 1.0};
  CHECK_THROWS_AS(forest_quantile(rf, x, 0.5), InvalidArgument);
  ForestModel qrf = fit_forest(d.view(), small_params(4, 3), ForestKind::Qrf);
  CHECK_THROWS_AS(forest_quantile(qrf, x, 0.0), InvalidArgument);
  CHECK_THROWS_AS(forest_quantile(qrf, x, 1.0), InvalidArgument);
}

TEST_CASE("same seed, same forest; different seed, different trees") {
  Dataset d = random_counts(5, 70, 3);
  ForestModel a = fit_forest(d.view(), small_params(42, 8), ForestKind::Rf);
  ForestModel b = fit_forest(d.view(), small_params(42, 8), ForestKind::Rf);
  ForestModel c = fit_forest(d.view(), small_params(43, 8), ForestKind::Rf);
  Rng rng = make_rng(1);
  bool any_diff = false;
  for (int probe = 0; probe < 30; ++probe) {
    std::vector<double> x = {draw_unit(rng) * 20, draw_unit(rng) * 20, draw_unit(rng) * 20};
    CHECK(forest_point(a, x) == forest_point(b, x));
    any_diff = any_diff || forest_point(a, x) != forest_point(c, x);
  }
  CHECK(any_diff);
}

TEST_CASE("one tree without bootstrap is just that tree") {
  Dataset d = random_counts(6, 50, 2);
  ForestParams p = small_params(13, 1);
  p.bootstrap = false;
  ForestModel m = fit_forest(d.view(), p, ForestKind::Rf);
  TreeParams tp = p.tree;
  tp.seed = p.base_seed;  // tree 0 gets base_seed + 0
  std::vector<int> rows(d.targets.size());
  std::iota(rows.begin(), rows.end(), 0);
  RegressionTree t = fit_tree(d.view(), rows, tp);
  for (std::size_t r = 0; r < d.targets.size(); ++r)
    CHECK(forest_point(m, d.view().row(r)) == std::max(0.0, t.predict(d.view().row(r))));
}

TEST_CASE("json round-trip preserves behaviour exactly") {
  Dataset d = random_counts(21, 60, 3);
  ForestModel m = fit_forest(d.view(), small_params(77, 6), ForestKind::Qrf);
  ForestModel back = forest_from_json(forest_to_json(m));
  CHECK(back.kind == m.kind);
  CHECK(back.n_features == m.n_features);
  REQUIRE(back.trees.size() == m.trees.size());
  std::vector<double> qs = {0.1, 0.5, 0.9};
  Rng rng = make_rng(2);
  for (int probe = 0; probe < 20; ++probe) {
    std::vector<double> x = {draw_unit(rng) * 20, draw_unit(rng) * 20, draw_unit(rng) * 20};
    CHECK(forest_point(back, x) == forest_point(m, x));
    CHECK(forest_quantiles(back, x, qs) == forest_quantiles(m, x, qs));
  }
}

TEST_CASE("fit validation") {
  Dataset d = random_counts(1, 10, 2);
  ForestParams p = small_params(0, 0);
  CHECK_THROWS_AS(fit_forest(d.view(), p, ForestKind::Rf), InvalidArgument);
  ForestModel m = fit_forest(d.view(), small_params(0, 2), ForestKind::Rf);
  std::vector<double> narrow = {1.0};
  CHECK_THROWS_AS(forest_point(m, narrow), InvalidArgument);
}
