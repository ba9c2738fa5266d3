// Copyright 2026 The bopl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BOPL_TREE_HPP_
#define BOPL_TREE_HPP_

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bopl {

// One node of a flattened binary decision tree. Internal nodes route a row
// to `left` when row[feature] < threshold and to `right` otherwise; leaves
// have feature == -1 and carry `value`.
struct TreeNode {
  std::int32_t feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;

  bool is_leaf() const { return feature < 0; }

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

// Binary decision tree stored as a flat node array rooted at index 0.
// Children always come after their parent, so evaluation is a loop rather
// than a recursion and arbitrarily deep trees are safe to serialize.
class Tree {
 public:
  // A single leaf with value 0.
  Tree();

  // Validates the node array: nonempty, every internal node's children are
  // in range and after the parent, every non-root node has exactly one
  // parent, all thresholds and values are finite. Throws InvalidArgument.
  explicit Tree(std::vector<TreeNode> nodes);

  static Tree Constant(double value);

  // Evaluates on an arbitrary feature accessor `feature(j) -> double`.
  template <typename FeatureFn>
    requires std::invocable<FeatureFn&, std::size_t>
  double Evaluate(FeatureFn&& feature) const {
    std::size_t index = 0;
    while (!nodes_[index].is_leaf()) {
      const TreeNode& node = nodes_[index];
      index = static_cast<std::size_t>(
          feature(static_cast<std::size_t>(node.feature)) < node.threshold
              ? node.left
              : node.right);
    }
    return nodes_[index].value;
  }

  // Evaluates on a dense row; features past the end of `row` read as 0.
  double Evaluate(std::span<const double> row) const;

  // Evaluates on the action-augmented row [context; one_hot(action)], the
  // representation every policy predictor is trained on.
  double EvaluateAugmented(std::span<const double> context,
                           std::size_t action) const;

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_leaves() const;
  // Depth of the deepest leaf; a single leaf has depth 0.
  std::size_t depth() const;

  friend bool operator==(const Tree&, const Tree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

}  // namespace bopl

#endif  // BOPL_TREE_HPP_
