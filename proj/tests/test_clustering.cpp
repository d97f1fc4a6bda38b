#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "pdc/clustering.hpp"

using namespace pdc;

namespace {

ClusterInput one_col(std::vector<double> values) {
  ClusterInput in;
  in.n_cols = 1;
  in.values = std::move(values);
  in.weights = {1.0};
  return in;
}

Adjacency path(std::size_t n) {
  Adjacency adj(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    adj.set(i, i + 1, true);
    adj.set(i + 1, i, true);
  }
  return adj;
}

}  // namespace

TEST_CASE("weighted distance") {
  std::vector<double> a = {0.0, 0.0}, b = {3.0, 4.0};
  std::vector<double> unit = {1.0, 1.0}, first_only = {1.0, 0.0}, heavy = {4.0, 4.0};
  CHECK(weighted_distance(a, b, unit) == doctest::Approx(5.0));
  CHECK(weighted_distance(a, b, first_only) == doctest::Approx(3.0));
  CHECK(weighted_distance(a, b, heavy) == doctest::Approx(10.0));
  std::vector<double> narrow = {1.0};
  CHECK_THROWS_AS(weighted_distance(a, b, narrow), InvalidArgument);
}

TEST_CASE("column normalization is min-max with constant columns zeroed") {
  ClusterInput in;
  in.n_cols = 2;
  in.values = {0.0, 7.0, 5.0, 7.0, 10.0, 7.0};
  in.weights = {1.0, 1.0};
  ClusterInput out = normalize_columns(in);
  CHECK(out.values == std::vector<double>{0.0, 0.0, 0.5, 0.0, 1.0, 0.0});
}

TEST_CASE("silhouette separates tight far groups and rejects one cluster") {
  ClusterInput in = one_col({0.0, 0.1, 10.0, 10.1});
  std::vector<int> good = {0, 0, 1, 1};
  CHECK(silhouette_mean(in, good) > 0.95);
  std::vector<int> crossed = {0, 1, 0, 1};
  CHECK(silhouette_mean(in, crossed) < 0.0);
  std::vector<int> lone = {0, 0, 0, 0};
  CHECK_THROWS_AS(silhouette_mean(in, lone), InvalidArgument);
  // Identical rows: every distance is zero, every row scores zero.
  ClusterInput flat = one_col({2.0, 2.0, 2.0, 2.0});
  std::vector<int> halves = {0, 0, 1, 1};
  CHECK(silhouette_mean(flat, halves) == 0.0);
}

TEST_CASE("ckmc recovers planted groups and prefers the real k") {
  ClusterInput in = one_col({0.00, 0.01, 0.02, 0.03, 0.04, 0.05,
                             0.95, 0.96, 0.97, 0.98, 0.99, 1.00});
  ClusterSet c = ckmc(in, 1, 4, 3, 42);
  CHECK(c.method == "ckmc");
  CHECK(c.k == 2);
  CHECK(c.silhouette > 0.9);
  REQUIRE(c.k_scores.size() == 4);
  CHECK(c.k_scores[0] == std::pair<int, double>{1, 0.0});
  for (int i = 0; i < 6; ++i) CHECK(c.labels[std::size_t(i)] == 0);
  for (int i = 6; i < 12; ++i) CHECK(c.labels[std::size_t(i)] == 1);
}

TEST_CASE("ckmc repairs undersized clusters") {
  ClusterInput in = one_col({0.00, 0.01, 0.02, 0.03, 0.04, 1.00});
  ClusterSet c = ckmc(in, 2, 2, 3, 7);
  auto groups = c.groups();
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].size() == 3);
  CHECK(groups[1].size() == 3);
  // The far row must keep its own side; repair pulls the nearest donors over.
  CHECK(c.labels[5] == c.labels[4]);
  CHECK(c.labels[5] == c.labels[3]);
}

TEST_CASE("ckmc on identical rows balances sizes with zero silhouette") {
  ClusterInput in = one_col(std::vector<double>(6, 3.0));
  ClusterSet c = ckmc(in, 2, 2, 3, 11);
  auto groups = c.groups();
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].size() == 3);
  CHECK(groups[1].size() == 3);
  CHECK(c.silhouette == 0.0);
}

TEST_CASE("ckmc skips infeasible k and throws when none fits") {
  ClusterInput in = one_col({0, 1, 2, 3, 4, 5, 6});
  ClusterSet c = ckmc(in, 2, 3, 3, 1);  // k=3 would need 9 rows
  REQUIRE(c.k_scores.size() == 1);
  CHECK(c.k_scores[0].first == 2);
  CHECK(c.k == 2);
  ClusterInput four = one_col({0, 1, 2, 3});
  CHECK_THROWS_AS(ckmc(four, 3, 3, 2, 1), InvalidArgument);
}

TEST_CASE("ckmc is deterministic in the seed") {
  ClusterInput in = one_col({0.2, 0.9, 0.4, 0.1, 0.8, 0.7, 0.3, 0.6, 0.5, 0.0});
  ClusterSet a = ckmc(in, 2, 4, 2, 31);
  ClusterSet b = ckmc(in, 2, 4, 2, 31);
  CHECK(a.labels == b.labels);
  CHECK(a.k == b.k);
  CHECK(a.silhouette == b.silhouette);
}

TEST_CASE("ckmc validates its arguments") {
  ClusterInput in = one_col({1, 2, 3});
  CHECK_THROWS_AS(ckmc(one_col({}), 1, 2, 1, 0), InvalidArgument);
  CHECK_THROWS_AS(ckmc(in, 0, 2, 1, 0), InvalidArgument);
  CHECK_THROWS_AS(ckmc(in, 3, 2, 1, 0), InvalidArgument);
  CHECK_THROWS_AS(ckmc(in, 1, 2, 0, 0), InvalidArgument);
  ClusterInput bad = in;
  bad.weights = {1.0, 1.0};
  CHECK_THROWS_AS(ckmc(bad, 1, 2, 1, 0), InvalidArgument);
}

TEST_CASE("ice state masks pairs by contiguity and size") {
  std::vector<int> labels = {0, 0, 1, 2};
  Adjacency adj = path(4);
  ClusterInput norm = one_col({0.0, 0.2, 0.6, 1.0});
  IceState st = build_ice_state(labels, adj, norm, 2);
  CHECK(st.same_at(0, 1));
  CHECK(st.same_at(2, 2));
  CHECK(st.masked_at(0, 1) == 0.0);
  // {0,1} + {2} touches but would have 3 members: blocked by s_max.
  CHECK(!st.feasible_at(1, 2));
  CHECK(st.masked_at(1, 2) == std::numeric_limits<double>::infinity());
  // {2} + {3} touches and stays within size.
  CHECK(st.feasible_at(2, 3));
  CHECK(st.feasible_at(3, 2));
  CHECK(st.masked_at(2, 3) == doctest::Approx(0.4));
  // {0,1} + {3} never touches.
  CHECK(!st.feasible_at(0, 3));
}

TEST_CASE("contiguity violations find split clusters") {
  Adjacency adj = path(3);
  CHECK(contiguity_violations({0, 1, 0}, adj) == std::vector<int>{0});
  CHECK(contiguity_violations({0, 0, 1}, adj).empty());
  CHECK(contiguity_violations({0, 1, 2}, adj).empty());
}

TEST_CASE("cchc merges by average linkage on a worked path") {
  // Demands normalize to 0, 1/7, 3/7, 1. Merge one: zones 0 and 1 at 1/7.
  // Merge two: {0,1}+{2} averages 5/14, beating {2}+{3} at 4/7.
  ClusterInput demand = one_col({0.0, 1.0, 3.0, 7.0});
  Adjacency adj = path(4);
  CchcConstraints c{1, 4, 100.0};
  ClusterSet out = cchc_ice(demand, adj, c);
  CHECK(out.method == "cchc_ice");
  CHECK(out.k == 1);
  CHECK(out.stop_reason == StopReason::KMinReached);
  REQUIRE(out.merge_log.size() == 3);
  CHECK(out.merge_log[0] == std::pair<int, int>{0, 1});
  CHECK(out.merge_log[1] == std::pair<int, int>{0, 2});
  CHECK(out.merge_log[2] == std::pair<int, int>{0, 3});
}

TEST_CASE("cchc stops at the distance threshold") {
  ClusterInput demand = one_col({0.0, 1.0, 3.0, 7.0});
  Adjacency adj = path(4);
  // Third merge would average 17/21; cap sits below that.
  ClusterSet out = cchc_ice(demand, adj, CchcConstraints{1, 4, 0.5});
  CHECK(out.stop_reason == StopReason::DistanceThreshold);
  CHECK(out.k == 2);
  CHECK(out.labels == std::vector<int>{0, 0, 0, 1});
  CHECK(out.merge_log.size() == 2);
}

TEST_CASE("cchc respects the size cap and reports no feasible pair") {
  ClusterInput demand = one_col({0.0, 1.0, 3.0, 7.0});
  Adjacency adj = path(4);
  ClusterSet out = cchc_ice(demand, adj, CchcConstraints{1, 2, 100.0});
  CHECK(out.stop_reason == StopReason::NoFeasiblePair);
  CHECK(out.k == 2);
  CHECK(out.labels == std::vector<int>{0, 0, 1, 1});
  REQUIRE(out.merge_log.size() == 2);
  CHECK(out.merge_log[0] == std::pair<int, int>{0, 1});
  CHECK(out.merge_log[1] == std::pair<int, int>{2, 3});
}

TEST_CASE("cchc stops at k_min and breaks distance ties toward low zone ids") {
  ClusterInput demand = one_col({0.0, 0.0, 10.0, 10.0});
  Adjacency adj = path(4);
  ClusterSet out = cchc_ice(demand, adj, CchcConstraints{2, 9, 100.0});
  CHECK(out.stop_reason == StopReason::KMinReached);
  CHECK(out.k == 2);
  CHECK(out.labels == std::vector<int>{0, 0, 1, 1});
  REQUIRE(out.merge_log.size() == 2);
  CHECK(out.merge_log[0] == std::pair<int, int>{0, 1});  // tied at zero with (2,3)
  CHECK(out.merge_log[1] == std::pair<int, int>{2, 3});
}

TEST_CASE("cchc keeps disconnected zones apart") {
  ClusterInput demand = one_col({1.0, 1.0});
  Adjacency adj(2);  // no edges at all
  ClusterSet out = cchc_ice(demand, adj, CchcConstraints{1, 9, 100.0});
  CHECK(out.k == 2);
  CHECK(out.stop_reason == StopReason::NoFeasiblePair);
  CHECK(out.merge_log.empty());
}

TEST_CASE("cchc validates arguments") {
  ClusterInput demand = one_col({1.0, 2.0});
  Adjacency adj = path(2);
  CHECK_THROWS_AS(cchc_ice(one_col({}), Adjacency(0), CchcConstraints{}), InvalidArgument);
  CHECK_THROWS_AS(cchc_ice(demand, path(3), CchcConstraints{}), InvalidArgument);
  CHECK_THROWS_AS(cchc_ice(demand, adj, CchcConstraints{0, 9, 9.0}), InvalidArgument);
  CHECK_THROWS_AS(cchc_ice(demand, adj, CchcConstraints{1, 0, 9.0}), InvalidArgument);
  CHECK_THROWS_AS(cchc_ice(demand, adj, CchcConstraints{1, 9, 0.0}), InvalidArgument);
}

TEST_CASE("every cchc cluster stays connected") {
  // A 3x3 lattice with demands that tempt merges across the board.
  Adjacency adj(9);
  auto link = [&](int a, int b) {
    adj.set(std::size_t(a), std::size_t(b), true);
    adj.set(std::size_t(b), std::size_t(a), true);
  };
  for (int r = 0; r < 3; ++r)
    for (int col = 0; col < 3; ++col) {
      int z = r * 3 + col;
      if (col < 2) link(z, z + 1);
      if (r < 2) link(z, z + 3);
    }
  ClusterInput demand = one_col({5, 1, 5, 1, 5, 1, 5, 1, 5});
  ClusterSet out = cchc_ice(demand, adj, CchcConstraints{2, 4, 100.0});
  CHECK(contiguity_violations(out.labels, adj).empty());
  for (const auto& g : out.groups()) CHECK(g.size() <= 4);
}

TEST_CASE("threshold bands follow the empirical distribution") {
  std::vector<double> cuts = {0.25, 0.5, 0.75};

  // All equal: every zone sits at fraction 1, one band.
  std::vector<double> flat = {4.0, 4.0, 4.0, 4.0};
  ClusterSet all_one = threshold_clusters(flat, cuts);
  CHECK(all_one.k == 1);
  CHECK(all_one.labels == std::vector<int>{0, 0, 0, 0});
  CHECK(all_one.method == "threshold");

  // Distinct values: fractions 1/4, 1/2, 3/4, 1 across three cuts.
  std::vector<double> distinct = {10.0, 20.0, 30.0, 40.0};
  ClusterSet spread = threshold_clusters(distinct, cuts);
  CHECK(spread.k == 4);
  CHECK(spread.labels == std::vector<int>{0, 1, 2, 3});

  // Ties share a band; a fraction equal to the cut stays below it.
  std::vector<double> half = {0.5};
  std::vector<double> tied = {5.0, 5.0, 9.0, 9.0};
  ClusterSet two = threshold_clusters(tied, half);
  CHECK(two.k == 2);
  CHECK(two.labels == std::vector<int>{0, 0, 1, 1});

  // Order of appearance drives the label numbering.
  std::vector<double> reversed = {40.0, 10.0, 40.0, 10.0};
  ClusterSet r = threshold_clusters(reversed, half);
  CHECK(r.labels == std::vector<int>{0, 1, 0, 1});
}

TEST_CASE("threshold cuts validate and dedupe") {
  std::vector<double> demand = {1.0, 2.0};
  std::vector<double> doubled = {0.5, 0.5}, zero = {0.0}, one = {1.0}, half = {0.5};
  ClusterSet c = threshold_clusters(demand, doubled);
  CHECK(c.k == 2);
  CHECK_THROWS_AS(threshold_clusters(demand, zero), InvalidArgument);
  CHECK_THROWS_AS(threshold_clusters(demand, one), InvalidArgument);
  CHECK_THROWS_AS(threshold_clusters(std::vector<double>{}, half), InvalidArgument);
}

TEST_CASE("stop reasons have names") {
  CHECK(std::string(stop_reason_name(StopReason::Converged)) == "converged");
  CHECK(std::string(stop_reason_name(StopReason::KMinReached)) == "k_min_reached");
  CHECK(std::string(stop_reason_name(StopReason::DistanceThreshold)) == "distance_threshold");
  CHECK(std::string(stop_reason_name(StopReason::NoFeasiblePair)) == "no_feasible_pair");
  CHECK(std::string(stop_reason_name(StopReason::ViolationDetected)) == "violation_detected");
}
