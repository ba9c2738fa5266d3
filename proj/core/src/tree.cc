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

#include "bopl/tree.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "bopl/error.hpp"

namespace bopl {

Tree::Tree() : nodes_{TreeNode{}} {}

Tree::Tree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw InvalidArgument("Tree: empty node array");
  const auto n = static_cast<std::int32_t>(nodes_.size());
  std::vector<int> parents(nodes_.size(), 0);
  for (std::int32_t i = 0; i < n; ++i) {
    const TreeNode& node = nodes_[i];
    if (node.is_leaf()) {
      if (!std::isfinite(node.value)) {
        throw InvalidArgument("Tree: non-finite leaf value at node " +
                              std::to_string(i));
      }
      continue;
    }
    if (!std::isfinite(node.threshold)) {
      throw InvalidArgument("Tree: non-finite threshold at node " +
                            std::to_string(i));
    }
    for (std::int32_t child : {node.left, node.right}) {
      if (child <= i || child >= n) {
        throw InvalidArgument("Tree: node " + std::to_string(i) +
                              " has invalid child " + std::to_string(child));
      }
      ++parents[child];
    }
  }
  for (std::int32_t i = 1; i < n; ++i) {
    if (parents[i] != 1) {
      throw InvalidArgument("Tree: node " + std::to_string(i) + " has " +
                            std::to_string(parents[i]) + " parents");
    }
  }
}

Tree Tree::Constant(double value) {
  TreeNode leaf;
  leaf.value = value;
  return Tree(std::vector<TreeNode>{leaf});
}

double Tree::Evaluate(std::span<const double> row) const {
  return Evaluate([row](std::size_t j) { return j < row.size() ? row[j] : 0.0; });
}

double Tree::EvaluateAugmented(std::span<const double> context,
                               std::size_t action) const {
  const std::size_t dim = context.size();
  return Evaluate([context, dim, action](std::size_t j) {
    if (j < dim) return context[j];
    return j - dim == action ? 1.0 : 0.0;
  });
}

std::size_t Tree::num_leaves() const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t Tree::depth() const {
  // Children follow parents, so one forward pass propagates depths.
  std::vector<std::size_t> depths(nodes_.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const TreeNode& node = nodes_[i];
    if (node.is_leaf()) {
      deepest = std::max(deepest, depths[i]);
      continue;
    }
    depths[node.left] = depths[i] + 1;
    depths[node.right] = depths[i] + 1;
  }
  return deepest;
}

}  // namespace bopl
