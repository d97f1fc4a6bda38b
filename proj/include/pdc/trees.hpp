#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pdc/errors.hpp"

namespace pdc {

// Borrowed view over a row-major numeric matrix plus targets.
struct DataView {
  std::span<const double> values;
  std::size_t n_cols = 0;
  std::span<const double> targets;

  std::size_t n_rows() const { return n_cols == 0 ? 0 : values.size() / n_cols; }
  double x(std::size_t r, std::size_t c) const { return values[r * n_cols + c]; }
  double y(std::size_t r) const { return targets[r]; }
  std::span<const double> row(std::size_t r) const {
    return values.subspan(r * n_cols, n_cols);
  }
};

enum class FeatureSubset { All, Sqrt };

struct TreeParams {
  int max_depth = 6;
  int min_samples_split = 4;
  int min_samples_leaf = 2;
  FeatureSubset feature_subset = FeatureSubset::All;
  std::uint64_t seed = 0;
};

// feature < 0 marks a leaf. Leaves keep the training rows that landed in
// them (with multiplicity); distribution queries need those later.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
  std::vector<int> members;

  bool is_leaf() const { return feature < 0; }
};

struct RegressionTree {
  std::size_t n_features = 0;
  std::vector<TreeNode> nodes;

  // Index of the leaf x falls into; ties on the threshold go left.
  int leaf_index(std::span<const double> x) const;
  double predict(std::span<const double> x) const { return nodes[std::size_t(leaf_index(x))].value; }
};

// Greedy variance-reduction CART. `samples` are row indices into `data`,
// repeats allowed (bootstrap). A node splits only if both children keep at
// least min_samples_leaf rows; among equal reductions the lowest feature
// index wins, then the smallest threshold. Thresholds sit halfway between
// neighboring distinct values.
RegressionTree fit_tree(const DataView& data, std::span<const int> samples, const TreeParams& p);

}  // namespace pdc
