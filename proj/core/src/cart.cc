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

#include "bopl/cart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "bopl/error.hpp"

namespace bopl {
namespace {

// Per-row sufficient statistics. Regression: (w, w y). Classification:
// (weight of +1 labels, weight of -1 labels).
struct Stat {
  double a = 0.0;
  double b = 0.0;

  Stat& operator+=(const Stat& o) {
    a += o.a;
    b += o.b;
    return *this;
  }
  friend Stat operator-(const Stat& x, const Stat& y) {
    return {x.a - y.a, x.b - y.b};
  }
};

struct RegressionCriterion {
  double lambda = 0.0;
  double min_gain = 0.0;

  struct Key {
    double gain = -std::numeric_limits<double>::infinity();
  };

  static double Weight(const Stat& s) { return s.a; }
  double Score(const Stat& s) const { return s.b * s.b / (s.a + lambda); }
  Key Evaluate(const Stat& left, const Stat& right, const Stat& parent) const {
    return {Score(left) + Score(right) - Score(parent)};
  }
  static bool Better(const Key& c, const Key& best) { return c.gain > best.gain; }
  bool Acceptable(const Key& c, const Stat&) const { return c.gain > min_gain; }
  double LeafValue(const Stat& s) const { return s.b / (s.a + lambda); }
};

struct ClassificationCriterion {
  double tol = 0.0;

  struct Key {
    double error = std::numeric_limits<double>::infinity();
    double gini = std::numeric_limits<double>::infinity();
  };

  static double Weight(const Stat& s) { return s.a + s.b; }
  static double Error(const Stat& s) { return std::min(s.a, s.b); }
  static double Gini(const Stat& s) {
    const double w = s.a + s.b;
    return w > 0.0 ? 2.0 * s.a * s.b / w : 0.0;
  }
  Key Evaluate(const Stat& left, const Stat& right, const Stat&) const {
    return {Error(left) + Error(right), Gini(left) + Gini(right)};
  }
  bool Precedes(const Key& c, const Key& ref) const {
    if (c.error < ref.error - tol) return true;
    return std::abs(c.error - ref.error) <= tol && c.gini < ref.gini - tol;
  }
  bool Better(const Key& c, const Key& best) const { return Precedes(c, best); }
  bool Acceptable(const Key& c, const Stat& parent) const {
    return Precedes(c, Key{Error(parent), Gini(parent)});
  }
  static double LeafValue(const Stat& s) { return s.a >= s.b ? 1.0 : -1.0; }
};

struct PendingNode {
  std::int32_t index;
  std::size_t begin;
  std::size_t end;
  int depth;
  Stat total;
};

template <typename Criterion>
class Grower {
 public:
  Grower(const FeatureMatrix& matrix, std::vector<Stat> stats,
         const Criterion& criterion, const TreeParams& params)
      : matrix_(matrix),
        stats_(std::move(stats)),
        criterion_(criterion),
        params_(params) {}

  Tree Grow() {
    const std::size_t n = matrix_.num_rows();
    const std::size_t num_features = matrix_.num_features();
    Stat root;
    for (std::size_t i = 0; i < n; ++i) {
      if (Criterion::Weight(stats_[i]) > 0.0) {
        root += stats_[i];
        ++m_;
      }
    }
    nodes_.push_back(TreeNode{});
    if (!Splittable(m_, root, 0) || num_features == 0) {
      nodes_[0].value = criterion_.LeafValue(root);
      return Tree(std::move(nodes_));
    }

    rows_.resize(num_features * m_);
    vals_.resize(num_features * m_);
    for (std::size_t j = 0; j < num_features; ++j) {
      std::size_t k = j * m_;
      const auto column = matrix_.column(j);
      for (std::uint32_t row : matrix_.sorted_rows(j)) {
        if (Criterion::Weight(stats_[row]) > 0.0) {
          rows_[k] = row;
          vals_[k] = column[row];
          ++k;
        }
      }
    }
    goes_left_.assign(n, 0);
    tmp_rows_.resize(m_);
    tmp_vals_.resize(m_);

    std::vector<PendingNode> stack{{0, 0, m_, 0, root}};
    while (!stack.empty()) {
      const PendingNode node = stack.back();
      stack.pop_back();
      Expand(node, stack);
    }
    return Tree(std::move(nodes_));
  }

 private:
  struct Split {
    typename Criterion::Key key;
    std::size_t feature = 0;
    std::size_t last_left = 0;  // position of the last left row
    double threshold = 0.0;
    Stat left;
  };

  bool Splittable(std::size_t count, const Stat& total, int depth) const {
    return depth < params_.max_depth && count >= 2 &&
           Criterion::Weight(total) >= 2.0 * params_.min_child_weight;
  }

  void Expand(const PendingNode& node, std::vector<PendingNode>& stack) {
    const std::size_t count = node.end - node.begin;
    Split best;
    bool found = false;
    if (Splittable(count, node.total, node.depth)) {
      found = FindSplit(node, best);
    }
    if (!found) {
      nodes_[node.index].value = criterion_.LeafValue(node.total);
      return;
    }

    const auto left_index = static_cast<std::int32_t>(nodes_.size());
    TreeNode& parent = nodes_[node.index];
    parent.feature = static_cast<std::int32_t>(best.feature);
    parent.threshold = best.threshold;
    parent.left = left_index;
    parent.right = left_index + 1;
    nodes_.push_back(TreeNode{});
    nodes_.push_back(TreeNode{});

    const std::size_t mid = best.last_left + 1;
    const Stat right = node.total - best.left;
    const PendingNode left_child{left_index, node.begin, mid, node.depth + 1,
                                 best.left};
    const PendingNode right_child{left_index + 1, mid, node.end, node.depth + 1,
                                  right};
    if (Splittable(mid - node.begin, best.left, node.depth + 1) ||
        Splittable(node.end - mid, right, node.depth + 1)) {
      Partition(node, best);
    }
    stack.push_back(right_child);
    stack.push_back(left_child);
  }

  bool FindSplit(const PendingNode& node, Split& best) const {
    const double mcw = params_.min_child_weight;
    const double total_weight = Criterion::Weight(node.total);
    bool any = false;
    for (std::size_t j = 0; j < matrix_.num_features(); ++j) {
      const double* vals = vals_.data() + j * m_;
      const std::uint32_t* rows = rows_.data() + j * m_;
      if (vals[node.begin] == vals[node.end - 1]) continue;
      Stat left;
      for (std::size_t k = node.begin; k + 1 < node.end; ++k) {
        left += stats_[rows[k]];
        if (!(vals[k] < vals[k + 1])) continue;
        const double wl = Criterion::Weight(left);
        if (wl < mcw) continue;
        if (total_weight - wl < mcw) break;
        const Stat right = node.total - left;
        if (Criterion::Weight(right) < mcw) break;
        const auto key = criterion_.Evaluate(left, right, node.total);
        if (!any || criterion_.Better(key, best.key)) {
          any = true;
          best.key = key;
          best.feature = j;
          best.last_left = k;
          best.left = left;
          double thr = std::midpoint(vals[k], vals[k + 1]);
          if (!(thr > vals[k])) thr = vals[k + 1];
          best.threshold = thr;
        }
      }
    }
    return any && criterion_.Acceptable(best.key, node.total);
  }

  void Partition(const PendingNode& node, const Split& best) {
    const std::uint32_t* split_rows = rows_.data() + best.feature * m_;
    for (std::size_t k = node.begin; k < node.end; ++k) {
      goes_left_[split_rows[k]] = k <= best.last_left ? 1 : 0;
    }
    for (std::size_t j = 0; j < matrix_.num_features(); ++j) {
      if (j == best.feature) continue;
      std::uint32_t* rows = rows_.data() + j * m_;
      double* vals = vals_.data() + j * m_;
      std::size_t out = node.begin;
      std::size_t spill = 0;
      for (std::size_t k = node.begin; k < node.end; ++k) {
        if (goes_left_[rows[k]]) {
          rows[out] = rows[k];
          vals[out] = vals[k];
          ++out;
        } else {
          tmp_rows_[spill] = rows[k];
          tmp_vals_[spill] = vals[k];
          ++spill;
        }
      }
      std::copy_n(tmp_rows_.begin(), spill, rows + out);
      std::copy_n(tmp_vals_.begin(), spill, vals + out);
    }
  }

  const FeatureMatrix& matrix_;
  std::vector<Stat> stats_;
  Criterion criterion_;
  TreeParams params_;
  std::size_t m_ = 0;
  std::vector<std::uint32_t> rows_;
  std::vector<double> vals_;
  std::vector<std::uint8_t> goes_left_;
  std::vector<std::uint32_t> tmp_rows_;
  std::vector<double> tmp_vals_;
  std::vector<TreeNode> nodes_;
};

void CheckWeights(std::span<const double> weights, std::size_t rows) {
  if (weights.size() != rows) {
    throw DimensionMismatch("got " + std::to_string(weights.size()) +
                            " weights for " + std::to_string(rows) + " rows");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InvalidArgument("sample weights must be finite and nonnegative");
    }
    total += w;
  }
  if (!(total > 0.0)) throw DegenerateData("total sample weight is zero");
}

FeatureMatrix MatrixFromSamples(std::size_t count, auto&& features_of) {
  if (count == 0) throw DegenerateData("no samples");
  const std::size_t dim = features_of(0).size();
  std::vector<double> values(count * dim);
  for (std::size_t i = 0; i < count; ++i) {
    const std::vector<double>& f = features_of(i);
    if (f.size() != dim) throw DimensionMismatch("samples differ in feature count");
    for (std::size_t j = 0; j < dim; ++j) values[j * count + i] = f[j];
  }
  return FeatureMatrix(count, dim, std::move(values));
}

}  // namespace

void TreeParams::Validate() const {
  if (max_depth < 0) throw InvalidArgument("max_depth must be nonnegative");
  if (!(min_child_weight >= 0.0) || !std::isfinite(min_child_weight)) {
    throw InvalidArgument("min_child_weight must be finite and nonnegative");
  }
  if (!(reg_lambda >= 0.0) || !std::isfinite(reg_lambda)) {
    throw InvalidArgument("reg_lambda must be finite and nonnegative");
  }
}

FeatureMatrix::FeatureMatrix(std::size_t num_rows, std::size_t num_features,
                             std::vector<double> values)
    : num_rows_(num_rows), num_features_(num_features), values_(std::move(values)) {
  if (values_.size() != num_rows_ * num_features_) {
    throw DimensionMismatch("feature matrix value count differs from shape");
  }
  if (num_rows_ > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidArgument("too many rows for a feature matrix");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidArgument("non-finite feature value");
  }
  order_.resize(num_rows_ * num_features_);
  for (std::size_t j = 0; j < num_features_; ++j) {
    auto first = order_.begin() + static_cast<std::ptrdiff_t>(j * num_rows_);
    auto last = first + static_cast<std::ptrdiff_t>(num_rows_);
    std::iota(first, last, 0u);
    const double* col = values_.data() + j * num_rows_;
    std::stable_sort(first, last, [col](std::uint32_t x, std::uint32_t y) {
      return col[x] < col[y];
    });
  }
}

FeatureMatrix FeatureMatrix::FromRows(std::span<const std::vector<double>> rows) {
  const std::size_t dim = rows.empty() ? 0 : rows[0].size();
  std::vector<double> values(rows.size() * dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) throw DimensionMismatch("rows differ in length");
    for (std::size_t j = 0; j < dim; ++j) values[j * rows.size() + i] = rows[i][j];
  }
  return FeatureMatrix(rows.size(), dim, std::move(values));
}

FeatureMatrix FeatureMatrix::ExpandedActions(const BanditDataset& data) {
  const auto k = static_cast<std::size_t>(data.num_actions());
  const auto d = static_cast<std::size_t>(data.feature_dim());
  const std::size_t rows = data.size() * k;
  std::vector<double> values(rows * (d + k), 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t a = 0; a < k; ++a) {
      const std::size_t r = i * k + a;
      for (std::size_t j = 0; j < d; ++j) values[j * rows + r] = data[i].features[j];
      values[(d + a) * rows + r] = 1.0;
    }
  }
  return FeatureMatrix(rows, d + k, std::move(values));
}

FeatureMatrix FeatureMatrix::LoggedActions(const BanditDataset& data) {
  const auto k = static_cast<std::size_t>(data.num_actions());
  const auto d = static_cast<std::size_t>(data.feature_dim());
  const std::size_t rows = data.size();
  std::vector<double> values(rows * (d + k), 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < d; ++j) values[j * rows + i] = data[i].features[j];
    values[(d + static_cast<std::size_t>(data[i].action)) * rows + i] = 1.0;
  }
  return FeatureMatrix(rows, d + k, std::move(values));
}

Tree FitRegressionTree(const FeatureMatrix& matrix, std::span<const double> weights,
                       std::span<const double> targets, const TreeParams& params) {
  params.Validate();
  CheckWeights(weights, matrix.num_rows());
  if (targets.size() != matrix.num_rows()) {
    throw DimensionMismatch("target count differs from row count");
  }
  std::vector<Stat> stats(matrix.num_rows());
  double spread = 0.0;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    if (!std::isfinite(targets[i])) throw InvalidArgument("non-finite target");
    stats[i] = {weights[i], weights[i] * targets[i]};
    spread += weights[i] * targets[i] * targets[i];
  }
  // Gains below this are rounding noise relative to the weighted sum of
  // squares and never justify a split.
  const RegressionCriterion criterion{params.reg_lambda, 1e-13 * spread};
  return Grower<RegressionCriterion>(matrix, std::move(stats), criterion, params)
      .Grow();
}

Tree FitClassificationTree(const FeatureMatrix& matrix,
                           std::span<const double> weights,
                           std::span<const int> labels, const TreeParams& params) {
  params.Validate();
  CheckWeights(weights, matrix.num_rows());
  if (labels.size() != matrix.num_rows()) {
    throw DimensionMismatch("label count differs from row count");
  }
  std::vector<Stat> stats(matrix.num_rows());
  double total = 0.0;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    if (labels[i] == 1) {
      stats[i] = {weights[i], 0.0};
    } else if (labels[i] == -1) {
      stats[i] = {0.0, weights[i]};
    } else {
      throw InvalidArgument("classification labels must be +1 or -1");
    }
    total += weights[i];
  }
  const ClassificationCriterion criterion{1e-12 * total};
  return Grower<ClassificationCriterion>(matrix, std::move(stats), criterion,
                                         params)
      .Grow();
}

Predictor FitRegressionTree(std::span<const WeightedRegressionSample> samples,
                            const TreeParams& params) {
  const FeatureMatrix matrix = MatrixFromSamples(
      samples.size(),
      [&](std::size_t i) -> const std::vector<double>& { return samples[i].features; });
  std::vector<double> weights(samples.size());
  std::vector<double> targets(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    weights[i] = samples[i].weight;
    targets[i] = samples[i].target;
  }
  return Predictor(PredictorKind::kRegressionTree,
                   FitRegressionTree(matrix, weights, targets, params));
}

Predictor FitClassificationTree(
    std::span<const WeightedClassificationSample> samples,
    const TreeParams& params) {
  const FeatureMatrix matrix = MatrixFromSamples(
      samples.size(),
      [&](std::size_t i) -> const std::vector<double>& { return samples[i].features; });
  std::vector<double> weights(samples.size());
  std::vector<int> labels(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    weights[i] = samples[i].weight;
    labels[i] = samples[i].label;
  }
  return Predictor(PredictorKind::kClassificationTree,
                   FitClassificationTree(matrix, weights, labels, params));
}

}  // namespace bopl
