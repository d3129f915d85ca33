// Copyright 2026 The locshap Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "locshap/models.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace locshap {
namespace {

constexpr double kDistanceGuard = 1e-12;
constexpr double kMinGain = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

// Ids of `candidates` ordered by distance to `x`, ties by ascending id.
std::vector<std::pair<double, int>> rank_by_distance(
    const Dataset& data, std::span<const int> candidates,
    std::span<const double> x) {
  std::vector<std::pair<double, int>> ranked;
  ranked.reserve(candidates.size());
  for (int z : candidates) {
    ranked.emplace_back(euclidean_distance(data.points[z].features, x), z);
  }
  std::sort(ranked.begin(), ranked.end());
  return ranked;
}

std::vector<int> nearest(const Dataset& data, std::span<const double> x,
                         int count) {
  std::vector<int> all(data.size());
  std::iota(all.begin(), all.end(), 0);
  auto ranked = rank_by_distance(data, all, x);
  ranked.resize(std::min<std::size_t>(ranked.size(), count));
  std::vector<int> ids;
  ids.reserve(ranked.size());
  for (const auto& [d, z] : ranked) ids.push_back(z);
  std::sort(ids.begin(), ids.end());
  return ids;
}

double kernel_weight(const KernelParams& p, std::span<const double> a,
                     std::span<const double> b) {
  const double w = std::exp(-p.gamma * squared_distance(a, b));
  return w >= p.threshold ? w : 0.0;
}

double gini(std::span<const int> counts, int total) {
  if (total == 0) return 0.0;
  double sum_sq = 0.0;
  for (int c : counts) {
    const double f = static_cast<double>(c) / total;
    sum_sq += f * f;
  }
  return 1.0 - sum_sq;
}

}  // namespace

ModelFamily::ModelFamily(Params params) : params_(std::move(params)) {
  std::visit(
      Overloaded{
          [](const WknnParams& p) {
            if (p.k < 1) throw ValidationError("wknn: k must be positive");
          },
          [](const TreeParams& p) {
            if (p.max_depth < 1 || p.min_samples_split < 1 ||
                p.min_samples_leaf < 1) {
              throw ValidationError(
                  "tree: max_depth, min_samples_split and min_samples_leaf "
                  "must be positive");
            }
          },
          [](const KernelParams& p) {
            if (!(p.gamma > 0.0)) {
              throw ValidationError("kernel: gamma must be positive");
            }
            if (!(p.threshold > 0.0 && p.threshold <= 1.0)) {
              throw ValidationError("kernel: threshold must be in (0, 1]");
            }
          },
      },
      params_);
}

ModelFamily ModelFamily::from_name(std::string_view name) {
  if (name == "wknn") return wknn();
  if (name == "tree") return tree();
  if (name == "kernel") return kernel(1.0);
  throw ValidationError("unknown model family '" + std::string(name) +
                        "' (expected wknn, tree or kernel)");
}

ModelKind ModelFamily::kind() const {
  return static_cast<ModelKind>(params_.index());
}

std::string ModelFamily::name() const {
  switch (kind()) {
    case ModelKind::kWknn:
      return "wknn";
    case ModelKind::kTree:
      return "tree";
    case ModelKind::kKernel:
      return "kernel";
  }
  return "unknown";
}

std::vector<double> FittedModel::prior() const {
  return std::vector<double>(data_->num_classes, 1.0 / data_->num_classes);
}

int FittedModel::leaf_of(std::span<const double> x) const {
  int node = 0;
  while (nodes_[node].feature >= 0) {
    const TreeNode& n = nodes_[node];
    node = x[n.feature] <= n.threshold ? n.left : n.right;
  }
  return node;
}

std::vector<double> FittedModel::predict_proba(
    std::span<const double> x, std::span<const int> reference_support) const {
  if (coalition_.empty()) return prior();
  std::vector<double> votes(data_->num_classes, 0.0);
  double total = 0.0;
  switch (kind()) {
    case ModelKind::kWknn: {
      const int k = std::get<WknnParams>(family_.params()).k;
      std::vector<int> reference;
      if (reference_support.empty()) {
        reference = nearest(*data_, x, 2 * k);
        reference_support = reference;
      }
      Coalition voters = coalition_.intersect(reference_support);
      auto ranked = rank_by_distance(*data_, voters.members(), x);
      const std::size_t used = std::min<std::size_t>(ranked.size(), k);
      for (std::size_t i = 0; i < used; ++i) {
        const double w = 1.0 / (ranked[i].first + kDistanceGuard);
        votes[data_->points[ranked[i].second].label] += w;
        total += w;
      }
      break;
    }
    case ModelKind::kKernel: {
      const auto& p = std::get<KernelParams>(family_.params());
      for (int z : coalition_.members()) {
        const double w = kernel_weight(p, data_->points[z].features, x);
        votes[data_->points[z].label] += w;
        total += w;
      }
      break;
    }
    case ModelKind::kTree:
      return nodes_[leaf_of(x)].proba;
  }
  if (total <= 0.0) return prior();
  for (double& v : votes) v /= total;
  return votes;
}

int FittedModel::predict(std::span<const double> x,
                         std::span<const int> reference_support) const {
  auto p = predict_proba(x, reference_support);
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

double FittedModel::utility(const TestPoint& t,
                            std::span<const int> reference_support) const {
  return predict_proba(t.features, reference_support)[t.label];
}

FittedModel fit(const ModelFamily& family, const Dataset& data,
                const Coalition& coalition) {
  for (int z : coalition.members()) {
    if (z < 0 || z >= data.size()) {
      throw ValidationError("fit: coalition member " + std::to_string(z) +
                            " is not a training id");
    }
  }
  FittedModel model(family, data, coalition);
  if (family.kind() != ModelKind::kTree || coalition.empty()) return model;

  const auto& p = std::get<TreeParams>(family.params());
  const int classes = data.num_classes;
  auto& nodes = model.nodes_;
  auto class_counts = [&](std::span<const int> ids) {
    std::vector<int> counts(classes, 0);
    for (int z : ids) ++counts[data.points[z].label];
    return counts;
  };

  struct Pending {
    int node;
    int depth;
  };
  nodes.push_back({});
  nodes[0].members.assign(coalition.members().begin(), coalition.members().end());
  std::vector<Pending> stack = {{0, 0}};
  while (!stack.empty()) {
    auto [id, depth] = stack.back();
    stack.pop_back();
    std::vector<int> members = nodes[id].members;
    const int size = static_cast<int>(members.size());
    auto counts = class_counts(members);
    nodes[id].proba.resize(classes);
    for (int c = 0; c < classes; ++c) {
      nodes[id].proba[c] = static_cast<double>(counts[c]) / size;
    }
    const double parent_gini = gini(counts, size);
    if (depth >= p.max_depth || size < p.min_samples_split ||
        parent_gini <= 0.0) {
      continue;
    }

    double best_gain = kMinGain;
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::pair<double, int>> sorted(size);
    for (int f = 0; f < data.dim(); ++f) {
      for (int i = 0; i < size; ++i) {
        sorted[i] = {data.points[members[i]].features[f],
                     data.points[members[i]].label};
      }
      std::sort(sorted.begin(), sorted.end());
      std::vector<int> left(classes, 0);
      std::vector<int> right = counts;
      for (int i = 0; i + 1 < size; ++i) {
        ++left[sorted[i].second];
        --right[sorted[i].second];
        if (sorted[i].first == sorted[i + 1].first) continue;
        const int nl = i + 1;
        const int nr = size - nl;
        if (nl < p.min_samples_leaf || nr < p.min_samples_leaf) continue;
        const double gain = parent_gini - (nl * gini(left, nl) +
                                           nr * gini(right, nr)) / size;
        // Strict improvement keeps the lowest (feature, threshold) on ties.
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = f;
          best_threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
        }
      }
    }
    if (best_feature < 0) continue;

    FittedModel::TreeNode left_node, right_node;
    left_node.parent = right_node.parent = id;
    for (int z : members) {
      (data.points[z].features[best_feature] <= best_threshold ? left_node
                                                               : right_node)
          .members.push_back(z);
    }
    const int left_id = static_cast<int>(nodes.size());
    nodes.push_back(std::move(left_node));
    nodes.push_back(std::move(right_node));
    nodes[id].feature = best_feature;
    nodes[id].threshold = best_threshold;
    nodes[id].left = left_id;
    nodes[id].right = left_id + 1;
    stack.push_back({left_id + 1, depth + 1});
    stack.push_back({left_id, depth + 1});
  }
  return model;
}

namespace {

std::vector<int> all_ids(const Dataset& data) {
  std::vector<int> ids(data.size());
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

}  // namespace

std::vector<int> support(const ModelFamily& family, const Dataset& data,
                         const TestPoint& t) {
  const TestPoint one[] = {t};
  SupportMap map = build_support_map(family, data, one);
  auto s = map.of(0);
  return {s.begin(), s.end()};
}

SupportMap build_support_map(const ModelFamily& family, const Dataset& data,
                             std::span<const TestPoint> tests) {
  std::vector<std::vector<int>> supports(tests.size());
  switch (family.kind()) {
    case ModelKind::kWknn: {
      const int k = std::get<WknnParams>(family.params()).k;
      for (std::size_t i = 0; i < tests.size(); ++i) {
        supports[i] = nearest(data, tests[i].features, 2 * k);
      }
      break;
    }
    case ModelKind::kKernel: {
      const auto& p = std::get<KernelParams>(family.params());
      for (std::size_t i = 0; i < tests.size(); ++i) {
        for (int z = 0; z < data.size(); ++z) {
          if (kernel_weight(p, data.points[z].features, tests[i].features) > 0.0) {
            supports[i].push_back(z);
          }
        }
      }
      break;
    }
    case ModelKind::kTree: {
      const std::vector<int> everyone = all_ids(data);
      FittedModel reference = fit(family, data, Coalition::from_sorted(everyone));
      for (std::size_t i = 0; i < tests.size(); ++i) {
        if (reference.nodes_.empty()) break;
        // Points sharing the parent of the test point's leaf; all of D when
        // the leaf is the root.
        const int parent = reference.nodes_[reference.leaf_of(tests[i].features)].parent;
        supports[i] = parent < 0 ? everyone : reference.nodes_[parent].members;
      }
      break;
    }
  }
  return SupportMap(data.size(), std::move(supports));
}

ModelOracle::ModelOracle(ModelFamily family, const Dataset& data,
                         std::span<const TestPoint> tests)
    : family_(std::move(family)), data_(data), tests_(tests) {
  data.validate();
  validate_tests(data, tests);
  if (family_.kind() == ModelKind::kWknn) {
    SupportMap map = build_support_map(family_, data, tests);
    reference_.resize(tests.size());
    for (std::size_t i = 0; i < tests.size(); ++i) {
      auto s = map.of(static_cast<int>(i));
      reference_[i].assign(s.begin(), s.end());
    }
  }
}

Evaluation ModelOracle::evaluate(const Coalition& coalition,
                                 std::span<const int> tests) const {
  FittedModel model = fit(family_, data_, coalition);
  Evaluation out;
  out.utilities.reserve(tests.size());
  out.predictions.reserve(tests.size());
  for (int t : tests) {
    std::span<const int> ref;
    if (!reference_.empty()) ref = reference_.at(t);
    auto p = model.predict_proba(tests_[t].features, ref);
    out.utilities.push_back(p[tests_[t].label]);
    out.predictions.push_back(
        static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin()));
  }
  return out;
}

}  // namespace locshap
