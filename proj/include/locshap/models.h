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

#ifndef LOCSHAP_MODELS_H_
#define LOCSHAP_MODELS_H_

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "locshap/coalition.h"
#include "locshap/oracle.h"
#include "locshap/support.h"
#include "locshap/types.h"

namespace locshap {

// Weighted k-nearest-neighbour vote. The reference support of a test point is
// its 2k nearest training points; a coalition only votes through members of
// that neighbourhood, which makes locality exact.
struct WknnParams {
  int k = 5;
};

// CART classifier, Gini impurity.
struct TreeParams {
  int max_depth = 8;
  int min_samples_split = 2;
  int min_samples_leaf = 1;
};

// Nadaraya-Watson class vote with weight exp(-gamma * d^2), clamped to zero
// below `threshold`.
struct KernelParams {
  double gamma = 1.0;
  double threshold = 0.5;
};

enum class ModelKind { kWknn, kTree, kKernel };

class ModelFamily {
 public:
  using Params = std::variant<WknnParams, TreeParams, KernelParams>;

  explicit ModelFamily(Params params);
  static ModelFamily wknn(int k = 5) { return ModelFamily(WknnParams{k}); }
  static ModelFamily tree(TreeParams p = {}) { return ModelFamily(p); }
  static ModelFamily kernel(double gamma, double threshold = 0.5) {
    return ModelFamily(KernelParams{gamma, threshold});
  }
  // Accepts "wknn", "tree" or "kernel" with default hyperparameters.
  static ModelFamily from_name(std::string_view name);

  ModelKind kind() const;
  std::string name() const;
  const Params& params() const { return params_; }

 private:
  Params params_;
};

// A model trained on one coalition. Holds a non-owning pointer to the
// dataset, which must outlive it.
class FittedModel {
 public:
  // Class probabilities at `x`. `reference_support` is the test point's
  // sorted 2k-neighbourhood and is only consulted by wknn; pass an empty span
  // to have it recomputed.
  std::vector<double> predict_proba(std::span<const double> x,
                                    std::span<const int> reference_support = {}) const;
  // Argmax class, lowest id on ties.
  int predict(std::span<const double> x,
              std::span<const int> reference_support = {}) const;
  // Probability mass on the test point's true label.
  double utility(const TestPoint& t,
                 std::span<const int> reference_support = {}) const;

  const Coalition& coalition() const { return coalition_; }
  ModelKind kind() const { return family_.kind(); }

 private:
  friend FittedModel fit(const ModelFamily&, const Dataset&, const Coalition&);
  friend std::vector<int> support(const ModelFamily&, const Dataset&,
                                  const TestPoint&);
  friend SupportMap build_support_map(const ModelFamily&, const Dataset&,
                                      std::span<const TestPoint>);

  struct TreeNode {
    int feature = -1;  // -1 for leaves
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int parent = -1;
    std::vector<double> proba;
    std::vector<int> members;  // training ids routed here, sorted
  };

  FittedModel(const ModelFamily& family, const Dataset& data, Coalition c)
      : family_(family), data_(&data), coalition_(std::move(c)) {}

  int leaf_of(std::span<const double> x) const;
  std::vector<double> prior() const;

  ModelFamily family_;
  const Dataset* data_;
  Coalition coalition_;
  std::vector<TreeNode> nodes_;
};

// Trains `family` on the members of `coalition`. The empty coalition yields
// the uniform prior over classes.
FittedModel fit(const ModelFamily& family, const Dataset& data,
                const Coalition& coalition);

// Training ids that can influence the prediction at `t` under the reference
// model trained on all of `data`, sorted.
std::vector<int> support(const ModelFamily& family, const Dataset& data,
                         const TestPoint& t);
SupportMap build_support_map(const ModelFamily& family, const Dataset& data,
                             std::span<const TestPoint> tests);

// The game v_t(S) = utility(fit(S), t). Every evaluate() trains once.
class ModelOracle : public UtilityOracle {
 public:
  ModelOracle(ModelFamily family, const Dataset& data,
              std::span<const TestPoint> tests);

  int num_players() const override { return data_.size(); }
  int num_tests() const override { return static_cast<int>(tests_.size()); }
  Evaluation evaluate(const Coalition& coalition,
                      std::span<const int> tests) const override;

  const ModelFamily& family() const { return family_; }

 private:
  ModelFamily family_;
  const Dataset& data_;
  std::span<const TestPoint> tests_;
  // wknn reference neighbourhoods, one per test; empty for other kinds.
  std::vector<std::vector<int>> reference_;
};

}  // namespace locshap

#endif  // LOCSHAP_MODELS_H_
