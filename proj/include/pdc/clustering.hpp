#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pdc/domain.hpp"

namespace pdc {

// Feature matrix for one clustering run: one row per zone being clustered.
struct ClusterInput {
  std::size_t n_cols = 0;
  std::vector<double> values;   // row-major
  std::vector<double> weights;  // per column

  std::size_t n_rows() const { return n_cols == 0 ? 0 : values.size() / n_cols; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values.data() + r * n_cols, n_cols);
  }
};

enum class StopReason { Converged, KMinReached, DistanceThreshold, NoFeasiblePair, ViolationDetected };

const char* stop_reason_name(StopReason r);

struct ClusterSet {
  std::vector<int> labels;  // one per row, 0..k-1, relabeled by first appearance
  int k = 0;
  StopReason stop_reason = StopReason::Converged;
  std::string method;
  double silhouette = 0.0;                        // ckmc: score of the chosen k
  std::vector<std::pair<int, double>> k_scores;   // ckmc: silhouette per candidate k
  std::vector<std::pair<int, int>> merge_log;     // cchc_ice: merged pair per step,
                                                  // identified by smallest member row

  std::vector<std::vector<int>> groups() const;  // rows per cluster, each sorted
};

double weighted_distance(std::span<const double> a, std::span<const double> b,
                         std::span<const double> w);

// Column-wise min-max scaling to [0,1]; constant columns go to zero.
ClusterInput normalize_columns(const ClusterInput& in);

// Mean silhouette over all rows under the weighted distance. Needs at
// least two clusters; singleton rows score zero.
double silhouette_mean(const ClusterInput& in, std::span<const int> labels);

// Constrained k-means: silhouette picks k from [k_lo, k_hi], every cluster
// keeps at least min_cluster_size rows via a greedy repair.
ClusterSet ckmc(const ClusterInput& in, int k_lo, int k_hi, int min_cluster_size,
                std::uint64_t seed);

struct CchcConstraints {
  int k_min = 3;
  int s_max = 9;
  double d_max = 9.0;  // may be infinity
};

// Per-iteration state of the contiguity-constrained merge: same-cluster
// mask, feasible-pair mask, and the masked pairwise distances.
struct IceState {
  std::size_t n = 0;
  std::vector<std::uint8_t> same;      // n*n, 1 when rows share a cluster
  std::vector<std::uint8_t> feasible;  // n*n, 1 when the clusters could merge
  std::vector<double> masked;          // 0 same / distance feasible / +inf otherwise

  bool same_at(std::size_t i, std::size_t j) const { return same[i * n + j] != 0; }
  bool feasible_at(std::size_t i, std::size_t j) const { return feasible[i * n + j] != 0; }
  double masked_at(std::size_t i, std::size_t j) const { return masked[i * n + j]; }
};

IceState build_ice_state(const std::vector<int>& labels, const Adjacency& adj,
                         const ClusterInput& normalized, int s_max);

// Bottom-up merging from singletons under contiguity, size, and distance
// constraints. Input rows are demand features; they are normalized here and
// weighted equally.
ClusterSet cchc_ice(const ClusterInput& demand, const Adjacency& adj, const CchcConstraints& c);

// Ids of clusters that are not connected under the adjacency; empty = fine.
std::vector<int> contiguity_violations(const std::vector<int>& labels, const Adjacency& adj);

// Demand-band baseline: zones split by where their demand sits in the
// empirical distribution relative to the cut points.
ClusterSet threshold_clusters(std::span<const double> demand, std::span<const double> cuts);

}  // namespace pdc
