#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "veritas/label.hpp"
#include "veritas/matrix.hpp"
#include "veritas/rng.hpp"

namespace veritas {

enum class SplitCriterion { gini, entropy };

std::string_view to_string(SplitCriterion c) noexcept;
SplitCriterion split_criterion_from_string(std::string_view name);

/// Impurity of a node holding the given class weights. Entropy is in bits.
double impurity(SplitCriterion criterion, double deceptive_weight, double truthful_weight) noexcept;

struct TreeOptions {
  SplitCriterion criterion = SplitCriterion::gini;
  std::optional<std::size_t> max_depth;  // nullopt: grow until pure
  std::size_t min_samples_split = 2;
  friend bool operator==(const TreeOptions&, const TreeOptions&) = default;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // x[feature] <= threshold goes left
  std::int32_t left = -1;
  std::int32_t right = -1;
  Label label = Label::deceptive;  // weighted majority, ties to deceptive
  double deceptive_fraction = 0.0;

  bool is_leaf() const noexcept { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Binary tree stored in preorder; node 0 is the root.
struct DecisionTree {
  std::vector<TreeNode> nodes;
  TreeOptions options;

  const TreeNode& leaf_for(std::span<const double> x) const;
  Label predict(std::span<const double> x) const { return leaf_for(x).label; }
  std::size_t depth() const;

  friend bool operator==(const DecisionTree& a, const DecisionTree& b) { return a.nodes == b.nodes; }
};

/// Feature-major copy of a matrix, which is what split search scans.
class ColumnMatrix {
 public:
  explicit ColumnMatrix(const Matrix& X);
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::span<const double> column(std::size_t j) const noexcept { return {data_.data() + j * rows_, rows_}; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

/// Greedy CART growth on weighted samples (weight 0 drops a row).
///
/// Candidate thresholds are midpoints between consecutive distinct values.
/// The split with the largest impurity decrease wins; ties go to the lower
/// feature index, then the lower threshold. With `m_features` below the
/// column count, features are visited in a random order and the search stops
/// once `m_features` non-constant ones have been scored.
DecisionTree grow_tree(const ColumnMatrix& X, std::span<const Label> y, std::span<const double> weights,
                       const TreeOptions& options, std::size_t m_features, Xoshiro256ss& rng);

}  // namespace veritas
