#include "pdc/trees.hpp"

#include <algorithm>
#include <cmath>

#include "pdc/rng.hpp"

namespace pdc {

int RegressionTree::leaf_index(std::span<const double> x) const {
  if (x.size() != n_features)
    throw InvalidArgument("feature row has " + std::to_string(x.size()) + " values, tree expects " +
                          std::to_string(n_features));
  int i = 0;
  while (!nodes[std::size_t(i)].is_leaf()) {
    const TreeNode& nd = nodes[std::size_t(i)];
    i = x[std::size_t(nd.feature)] <= nd.threshold ? nd.left : nd.right;
  }
  return i;
}

namespace {

struct Split {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double score = -1.0;  // sum_l^2/n_l + sum_r^2/n_r, larger is better
};

struct Builder {
  const DataView& data;
  const TreeParams& p;
  RegressionTree tree;
  Rng rng;
  std::vector<std::pair<double, double>> scratch;  // (feature value, target)

  Builder(const DataView& d, const TreeParams& params)
      : data(d), p(params), rng(make_rng(params.seed)) {}

  std::vector<int> candidate_features() {
    std::size_t f = data.n_cols;
    if (p.feature_subset == FeatureSubset::All) {
      std::vector<int> all(f);
      for (std::size_t i = 0; i < f; ++i) all[i] = int(i);
      return all;
    }
    std::size_t k = std::size_t(std::ceil(std::sqrt(double(f))));
    auto picked = sample_without_replacement(rng, f, k);
    std::sort(picked.begin(), picked.end());
    return picked;
  }

  Split best_split(const std::vector<int>& rows) {
    Split best;
    std::size_t n = rows.size();
    for (int f : candidate_features()) {
      scratch.clear();
      for (int r : rows) scratch.emplace_back(data.x(std::size_t(r), std::size_t(f)), data.y(std::size_t(r)));
      std::sort(scratch.begin(), scratch.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      double total = 0.0;
      for (const auto& [v, y] : scratch) total += y;
      double left_sum = 0.0;
      std::size_t left_n = 0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left_sum += scratch[i].second;
        ++left_n;
        if (scratch[i].first == scratch[i + 1].first) continue;
        std::size_t right_n = n - left_n;
        if (left_n < std::size_t(p.min_samples_leaf) || right_n < std::size_t(p.min_samples_leaf))
          continue;
        double right_sum = total - left_sum;
        double score =
            left_sum * left_sum / double(left_n) + right_sum * right_sum / double(right_n);
        if (!best.found || score > best.score) {
          double mid = scratch[i].first + (scratch[i + 1].first - scratch[i].first) / 2.0;
          // Keep the boundary strictly below the next value so the split
          // reproduces the evaluated prefix even when the midpoint rounds.
          if (!(mid < scratch[i + 1].first)) mid = scratch[i].first;
          best.found = true;
          best.feature = f;
          best.threshold = mid;
          best.score = score;
        }
      }
    }
    return best;
  }

  int build(std::vector<int> rows, int depth) {
    int id = int(tree.nodes.size());
    tree.nodes.emplace_back();

    double sum = 0.0;
    for (int r : rows) sum += data.y(std::size_t(r));
    double mean = sum / double(rows.size());

    bool constant = true;
    for (int r : rows)
      if (data.y(std::size_t(r)) != data.y(std::size_t(rows[0]))) {
        constant = false;
        break;
      }

    Split split;
    if (depth < p.max_depth && rows.size() >= std::size_t(p.min_samples_split) && !constant)
      split = best_split(rows);

    if (!split.found) {
      tree.nodes[std::size_t(id)].value = mean;
      tree.nodes[std::size_t(id)].members = std::move(rows);
      return id;
    }

    std::vector<int> left, right;
    for (int r : rows) {
      if (data.x(std::size_t(r), std::size_t(split.feature)) <= split.threshold)
        left.push_back(r);
      else
        right.push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    tree.nodes[std::size_t(id)].feature = split.feature;
    tree.nodes[std::size_t(id)].threshold = split.threshold;
    tree.nodes[std::size_t(id)].value = mean;
    int l = build(std::move(left), depth + 1);
    int r = build(std::move(right), depth + 1);
    tree.nodes[std::size_t(id)].left = l;
    tree.nodes[std::size_t(id)].right = r;
    return id;
  }
};

}  // namespace

RegressionTree fit_tree(const DataView& data, std::span<const int> samples, const TreeParams& p) {
  if (samples.empty()) throw InvalidArgument("fit_tree: empty sample set");
  if (data.n_cols == 0) throw InvalidArgument("fit_tree: no features");
  if (data.targets.size() != data.n_rows())
    throw InvalidArgument("fit_tree: target count does not match row count");
  if (p.max_depth < 0 || p.min_samples_leaf < 1 || p.min_samples_split < 2)
    throw InvalidArgument("fit_tree: bad tree parameters");
  for (int r : samples)
    if (r < 0 || std::size_t(r) >= data.n_rows())
      throw InvalidArgument("fit_tree: sample index out of range");

  Builder b(data, p);
  b.tree.n_features = data.n_cols;
  b.build(std::vector<int>(samples.begin(), samples.end()), 0);
  return b.tree;
}

}  // namespace pdc
