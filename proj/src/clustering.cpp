#include "pdc/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "pdc/rng.hpp"

namespace pdc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<int> relabel_by_appearance(const std::vector<int>& labels) {
  int top = 0;
  for (int l : labels) top = std::max(top, l + 1);
  std::vector<int> mapping(std::size_t(top), -1);
  std::vector<int> out(labels.size());
  int next = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    int l = labels[i];
    if (mapping[std::size_t(l)] < 0) mapping[std::size_t(l)] = next++;
    out[i] = mapping[std::size_t(l)];
  }
  return out;
}

// at_least keeps trailing empty clusters visible to callers that iterate a
// fixed k even when no row carries the last labels.
std::vector<std::vector<int>> group_rows(const std::vector<int>& labels, int at_least = 0) {
  int k = at_least;
  for (int l : labels) k = std::max(k, l + 1);
  std::vector<std::vector<int>> groups;
  groups.resize(std::size_t(k));
  for (std::size_t i = 0; i < labels.size(); ++i) groups[std::size_t(labels[i])].push_back(int(i));
  return groups;
}

}  // namespace

const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::Converged: return "converged";
    case StopReason::KMinReached: return "k_min_reached";
    case StopReason::DistanceThreshold: return "distance_threshold";
    case StopReason::NoFeasiblePair: return "no_feasible_pair";
    case StopReason::ViolationDetected: return "violation_detected";
  }
  return "unknown";
}

std::vector<std::vector<int>> ClusterSet::groups() const { return group_rows(labels); }

double weighted_distance(std::span<const double> a, std::span<const double> b,
                         std::span<const double> w) {
  if (a.size() != b.size() || a.size() != w.size())
    throw InvalidArgument("weighted_distance: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    sum += w[i] * d * d;
  }
  return std::sqrt(sum);
}

ClusterInput normalize_columns(const ClusterInput& in) {
  ClusterInput out = in;
  std::size_t rows = in.n_rows();
  for (std::size_t c = 0; c < in.n_cols; ++c) {
    double lo = kInf, hi = -kInf;
    for (std::size_t r = 0; r < rows; ++r) {
      lo = std::min(lo, in.values[r * in.n_cols + c]);
      hi = std::max(hi, in.values[r * in.n_cols + c]);
    }
    double span = hi - lo;
    for (std::size_t r = 0; r < rows; ++r) {
      double& v = out.values[r * in.n_cols + c];
      v = span == 0.0 ? 0.0 : (v - lo) / span;
    }
  }
  return out;
}

double silhouette_mean(const ClusterInput& in, std::span<const int> labels) {
  std::size_t n = in.n_rows();
  if (labels.size() != n) throw InvalidArgument("silhouette: label count mismatch");
  auto groups = group_rows(std::vector<int>(labels.begin(), labels.end()));
  std::size_t k = 0;
  for (const auto& g : groups)
    if (!g.empty()) ++k;
  if (k < 2) throw InvalidArgument("silhouette needs at least two clusters");

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& own = groups[std::size_t(labels[i])];
    if (own.size() == 1) continue;  // singleton scores zero
    double a = 0.0;
    for (int j : own)
      if (std::size_t(j) != i) a += weighted_distance(in.row(i), in.row(std::size_t(j)), in.weights);
    a /= double(own.size() - 1);
    double b = kInf;
    for (const auto& other : groups) {
      if (other.empty() || &other == &own) continue;
      double d = 0.0;
      for (int j : other) d += weighted_distance(in.row(i), in.row(std::size_t(j)), in.weights);
      b = std::min(b, d / double(other.size()));
    }
    double denom = std::max(a, b);
    total += denom == 0.0 ? 0.0 : (b - a) / denom;
  }
  return total / double(n);
}

namespace {

struct LloydResult {
  std::vector<int> labels;
};

LloydResult constrained_lloyd(const ClusterInput& in, int k, int min_size, Rng& rng) {
  std::size_t n = in.n_rows();
  std::size_t cols = in.n_cols;

  // Farthest-point seeding.
  std::vector<std::size_t> centers;
  std::vector<bool> chosen(n, false);
  std::size_t first = draw_index(rng, n);
  centers.push_back(first);
  chosen[first] = true;
  while (centers.size() < std::size_t(k)) {
    double best = -1.0;
    std::size_t pick = 0;
    for (std::size_t z = 0; z < n; ++z) {
      if (chosen[z]) continue;
      double nearest = kInf;
      for (std::size_t c : centers)
        nearest = std::min(nearest, weighted_distance(in.row(z), in.row(c), in.weights));
      if (nearest > best) {
        best = nearest;
        pick = z;
      }
    }
    centers.push_back(pick);
    chosen[pick] = true;
  }

  std::vector<double> centroids(std::size_t(k) * cols);
  for (int c = 0; c < k; ++c)
    for (std::size_t f = 0; f < cols; ++f)
      centroids[std::size_t(c) * cols + f] = in.values[centers[std::size_t(c)] * cols + f];

  auto centroid_row = [&](int c) {
    return std::span<const double>(centroids.data() + std::size_t(c) * cols, cols);
  };
  auto recompute = [&](int c, const std::vector<std::vector<int>>& groups) {
    const auto& g = groups[std::size_t(c)];
    if (g.empty()) return;  // empty cluster keeps its centroid
    for (std::size_t f = 0; f < cols; ++f) {
      double sum = 0.0;
      for (int r : g) sum += in.values[std::size_t(r) * cols + f];
      centroids[std::size_t(c) * cols + f] = sum / double(g.size());
    }
  };

  std::vector<int> labels(n, 0);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (std::size_t z = 0; z < n; ++z) {
      double best = kInf;
      int pick = 0;
      for (int c = 0; c < k; ++c) {
        double d = weighted_distance(in.row(z), centroid_row(c), in.weights);
        if (d < best) {
          best = d;
          pick = c;
        }
      }
      if (labels[z] != pick) {
        labels[z] = pick;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;
    auto groups = group_rows(labels, k);
    for (int c = 0; c < k; ++c) recompute(c, groups);
    if (!changed) break;
  }

  // Greedy repair: feed the smallest cluster from donors that can spare a
  // row, nearest row first. Each move shrinks the total deficit, so this
  // ends well before the cap.
  for (std::size_t guard = 0; guard <= n + 1; ++guard) {
    auto groups = group_rows(labels, k);
    int needy = -1;
    for (int c = 0; c < k; ++c)
      if (groups[std::size_t(c)].size() < std::size_t(min_size) &&
          (needy < 0 || groups[std::size_t(c)].size() < groups[std::size_t(needy)].size()))
        needy = c;
    if (needy < 0) break;
    if (guard == n + 1) throw InvariantError("cluster size repair did not settle");
    double best = kInf;
    int pick = -1;
    for (std::size_t z = 0; z < n; ++z) {
      if (labels[z] == needy) continue;
      if (groups[std::size_t(labels[z])].size() <= std::size_t(min_size)) continue;
      double d = weighted_distance(in.row(z), centroid_row(needy), in.weights);
      if (d < best) {
        best = d;
        pick = int(z);
      }
    }
    if (pick < 0) throw InvariantError("cluster size repair found no donor");
    int from = labels[std::size_t(pick)];
    labels[std::size_t(pick)] = needy;
    auto regrouped = group_rows(labels, k);
    recompute(needy, regrouped);
    recompute(from, regrouped);
  }

  return LloydResult{std::move(labels)};
}

}  // namespace

ClusterSet ckmc(const ClusterInput& in, int k_lo, int k_hi, int min_cluster_size,
                std::uint64_t seed) {
  std::size_t n = in.n_rows();
  if (n == 0) throw InvalidArgument("ckmc: no rows");
  if (in.weights.size() != in.n_cols) throw InvalidArgument("ckmc: weight count mismatch");
  if (k_lo < 1 || k_hi < k_lo) throw InvalidArgument("ckmc: bad k range");
  if (min_cluster_size < 1) throw InvalidArgument("ckmc: min_cluster_size must be positive");

  ClusterInput norm = normalize_columns(in);

  ClusterSet best;
  best.method = "ckmc";
  bool any = false;
  for (int k = k_lo; k <= k_hi; ++k) {
    if (std::size_t(k) > n || std::size_t(k) * std::size_t(min_cluster_size) > n) continue;
    Rng rng = make_rng(seed + std::uint64_t(k));
    LloydResult res = constrained_lloyd(norm, k, min_cluster_size, rng);
    double sil = k >= 2 ? silhouette_mean(norm, res.labels) : 0.0;
    best.k_scores.emplace_back(k, sil);
    if (!any || sil > best.silhouette) {
      any = true;
      best.silhouette = sil;
      best.labels = relabel_by_appearance(res.labels);
      best.k = k;
    }
  }
  if (!any)
    throw InvalidArgument("ckmc: no k in [" + std::to_string(k_lo) + "," + std::to_string(k_hi) +
                          "] fits " + std::to_string(n) + " rows with min size " +
                          std::to_string(min_cluster_size));
  best.stop_reason = StopReason::Converged;
  return best;
}

IceState build_ice_state(const std::vector<int>& labels, const Adjacency& adj,
                         const ClusterInput& normalized, int s_max) {
  std::size_t n = labels.size();
  if (adj.n != n || normalized.n_rows() != n)
    throw InvalidArgument("ice state: size mismatch");
  IceState st;
  st.n = n;
  st.same.assign(n * n, 0);
  st.feasible.assign(n * n, 0);
  st.masked.assign(n * n, kInf);

  auto groups = group_rows(labels);
  std::size_t k = groups.size();
  std::vector<std::vector<bool>> pair_ok(k, std::vector<bool>(k, false));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      if (groups[a].empty() || groups[b].empty()) continue;
      if (groups[a].size() + groups[b].size() > std::size_t(s_max)) continue;
      bool touch = false;
      for (int i : groups[a]) {
        for (int j : groups[b])
          if (adj.at(std::size_t(i), std::size_t(j))) {
            touch = true;
            break;
          }
        if (touch) break;
      }
      pair_ok[a][b] = pair_ok[b][a] = touch;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (labels[i] == labels[j]) {
        st.same[i * n + j] = 1;
        st.masked[i * n + j] = 0.0;
      } else if (pair_ok[std::size_t(labels[i])][std::size_t(labels[j])]) {
        st.feasible[i * n + j] = 1;
        st.masked[i * n + j] =
            weighted_distance(normalized.row(i), normalized.row(j), normalized.weights);
      }
    }
  }
  return st;
}

std::vector<int> contiguity_violations(const std::vector<int>& labels, const Adjacency& adj) {
  std::vector<int> bad;
  auto groups = group_rows(labels);
  for (std::size_t label = 0; label < groups.size(); ++label) {
    const auto& members = groups[label];
    if (members.empty()) continue;
    std::vector<bool> in_cluster(adj.n, false), seen(adj.n, false);
    for (int z : members) in_cluster[std::size_t(z)] = true;
    std::queue<int> q;
    q.push(members[0]);
    seen[std::size_t(members[0])] = true;
    std::size_t reached = 1;
    while (!q.empty()) {
      int z = q.front();
      q.pop();
      for (std::size_t j = 0; j < adj.n; ++j)
        if (in_cluster[j] && !seen[j] && adj.at(std::size_t(z), j)) {
          seen[j] = true;
          ++reached;
          q.push(int(j));
        }
    }
    if (reached != members.size()) bad.push_back(int(label));
  }
  return bad;
}

ClusterSet cchc_ice(const ClusterInput& demand, const Adjacency& adj, const CchcConstraints& c) {
  std::size_t n = demand.n_rows();
  if (n == 0) throw InvalidArgument("cchc_ice: no rows");
  if (adj.n != n) throw InvalidArgument("cchc_ice: adjacency size mismatch");
  if (c.k_min < 1) throw InvalidArgument("cchc_ice: k_min must be positive");
  if (c.s_max < 1) throw InvalidArgument("cchc_ice: s_max must be positive");
  if (!(c.d_max > 0.0)) throw InvalidArgument("cchc_ice: d_max must be positive");

  ClusterInput norm = normalize_columns(demand);
  norm.weights.assign(norm.n_cols, 1.0);

  ClusterSet out;
  out.method = "cchc_ice";
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = int(i);
  int k = int(n);
  out.stop_reason = StopReason::Converged;

  while (true) {
    if (k <= c.k_min) {
      out.stop_reason = StopReason::KMinReached;
      break;
    }
    IceState st = build_ice_state(labels, adj, norm, c.s_max);
    auto groups = group_rows(labels);

    // Average linkage over the feasible pairs; ties fall to the pair whose
    // smallest member rows come first.
    double best_d = kInf;
    int best_a = -1, best_b = -1;
    for (std::size_t a = 0; a < groups.size(); ++a) {
      if (groups[a].empty()) continue;
      for (std::size_t b = a + 1; b < groups.size(); ++b) {
        if (groups[b].empty()) continue;
        if (!st.feasible_at(std::size_t(groups[a][0]), std::size_t(groups[b][0]))) continue;
        double sum = 0.0;
        for (int i : groups[a])
          for (int j : groups[b]) sum += st.masked_at(std::size_t(i), std::size_t(j));
        double avg = sum / double(groups[a].size() * groups[b].size());
        int lo = std::min(groups[a][0], groups[b][0]);
        int hi = std::max(groups[a][0], groups[b][0]);
        if (avg < best_d || (avg == best_d && (lo < std::min(best_a, best_b) ||
                                               (lo == std::min(best_a, best_b) &&
                                                hi < std::max(best_a, best_b))))) {
          best_d = avg;
          best_a = lo;
          best_b = hi;
        }
      }
    }

    if (best_a < 0) {
      out.stop_reason = StopReason::NoFeasiblePair;
      break;
    }
    if (best_d > c.d_max) {
      out.stop_reason = StopReason::DistanceThreshold;
      break;
    }

    std::vector<int> merged = labels;
    int from = labels[std::size_t(best_b)];
    int into = labels[std::size_t(best_a)];
    for (auto& l : merged)
      if (l == from) l = into;
    if (!contiguity_violations(merged, adj).empty()) {
      out.stop_reason = StopReason::ViolationDetected;
      break;
    }
    labels = std::move(merged);
    out.merge_log.emplace_back(best_a, best_b);
    --k;
  }

  out.labels = relabel_by_appearance(labels);
  out.k = k;
  return out;
}

ClusterSet threshold_clusters(std::span<const double> demand, std::span<const double> cuts) {
  if (demand.empty()) throw InvalidArgument("threshold_clusters: no demand values");
  std::vector<double> cut(cuts.begin(), cuts.end());
  std::sort(cut.begin(), cut.end());
  cut.erase(std::unique(cut.begin(), cut.end()), cut.end());
  for (double c : cut)
    if (!(c > 0.0 && c < 1.0)) throw InvalidArgument("threshold_clusters: cuts must lie in (0,1)");

  std::vector<double> sorted(demand.begin(), demand.end());
  std::sort(sorted.begin(), sorted.end());
  double n = double(sorted.size());

  std::vector<int> bands(demand.size());
  for (std::size_t i = 0; i < demand.size(); ++i) {
    double frac =
        double(std::upper_bound(sorted.begin(), sorted.end(), demand[i]) - sorted.begin()) / n;
    int band = 0;
    for (double c : cut)
      if (frac > c) ++band;
    bands[i] = band;
  }

  ClusterSet out;
  out.method = "threshold";
  out.labels = relabel_by_appearance(bands);
  out.k = 1 + *std::max_element(out.labels.begin(), out.labels.end());
  out.stop_reason = StopReason::Converged;
  return out;
}

}  // namespace pdc
