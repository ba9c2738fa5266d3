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

// Greedy CART learners with exact split search, used as boosting base
// learners.
//
// Split candidates are midpoints between consecutive distinct values of a
// feature among the rows of a node. Rows go left when value < threshold.
// Among equally good candidates the lowest feature index wins, then the
// lowest threshold. A split is only taken when both children carry at least
// `min_child_weight` total sample weight. Rows with zero weight are dropped
// before fitting.

#ifndef BOPL_CART_HPP_
#define BOPL_CART_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bopl/dataset.hpp"
#include "bopl/policy.hpp"
#include "bopl/tree.hpp"

namespace bopl {

struct TreeParams {
  // 0 gives a single leaf.
  int max_depth = 6;
  // Minimum total sample weight of each child of a split.
  double min_child_weight = 1.0;
  // Ridge term added to the weight sum in regression leaf values.
  double reg_lambda = 0.0;

  // Throws InvalidArgument on negative or non-finite values.
  void Validate() const;

  friend bool operator==(const TreeParams&, const TreeParams&) = default;
};

struct WeightedRegressionSample {
  std::vector<double> features;
  double weight = 0.0;
  double target = 0.0;
};

struct WeightedClassificationSample {
  std::vector<double> features;
  double weight = 0.0;
  // +1 or -1.
  int label = 1;
};

// Dense column-major feature matrix with every column presorted once, so
// that many trees can be fit on the same rows with different weights.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  // `values[j * num_rows + i]` is feature j of row i. Values must be finite.
  FeatureMatrix(std::size_t num_rows, std::size_t num_features,
                std::vector<double> values);

  // Rows must share one length.
  static FeatureMatrix FromRows(std::span<const std::vector<double>> rows);
  // n * |A| rows; row i * |A| + a is [x_i; e_a].
  static FeatureMatrix ExpandedActions(const BanditDataset& data);
  // n rows; row i is [x_i; e_{a_i}].
  static FeatureMatrix LoggedActions(const BanditDataset& data);

  std::size_t num_rows() const { return num_rows_; }
  std::size_t num_features() const { return num_features_; }

  double at(std::size_t row, std::size_t feature) const {
    return values_[feature * num_rows_ + row];
  }
  std::span<const double> column(std::size_t feature) const {
    return {values_.data() + feature * num_rows_, num_rows_};
  }
  // Row indices ordered by the feature's value; equal values keep row order.
  std::span<const std::uint32_t> sorted_rows(std::size_t feature) const {
    return {order_.data() + feature * num_rows_, num_rows_};
  }

  double Evaluate(const Tree& tree, std::size_t row) const {
    return tree.Evaluate([this, row](std::size_t j) { return at(row, j); });
  }

 private:
  std::size_t num_rows_ = 0;
  std::size_t num_features_ = 0;
  std::vector<double> values_;
  std::vector<std::uint32_t> order_;
};

// Weighted least squares: each split maximizes
//   G_L^2 / (H_L + lambda) + G_R^2 / (H_R + lambda) - G^2 / (H + lambda)
// with G = sum w y and H = sum w, which for lambda = 0 is the reduction in
// weighted squared error. Leaves predict G / (H + lambda).
//
// Throws InvalidArgument for negative or non-finite weights or targets and
// DegenerateData when the total weight is zero.
Tree FitRegressionTree(const FeatureMatrix& matrix,
                       std::span<const double> weights,
                       std::span<const double> targets,
                       const TreeParams& params);

// Weighted binary classification with labels in {-1, +1}. Splits minimize
// the weighted misclassification error of the two majority-vote children;
// candidates within a relative 1e-12 of the best error are ranked by
// weighted Gini impurity. A split is taken if it lowers the error, or keeps
// it and lowers the impurity. Leaves predict the weighted majority label
// with ties going to +1. `reg_lambda` is ignored.
Tree FitClassificationTree(const FeatureMatrix& matrix,
                           std::span<const double> weights,
                           std::span<const int> labels,
                           const TreeParams& params);

Predictor FitRegressionTree(std::span<const WeightedRegressionSample> samples,
                            const TreeParams& params);
Predictor FitClassificationTree(
    std::span<const WeightedClassificationSample> samples,
    const TreeParams& params);

}  // namespace bopl

#endif  // BOPL_CART_HPP_
