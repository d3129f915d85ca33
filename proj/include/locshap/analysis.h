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

#ifndef LOCSHAP_ANALYSIS_H_
#define LOCSHAP_ANALYSIS_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "locshap/exact.h"
#include "locshap/models.h"
#include "locshap/oracle.h"
#include "locshap/result.h"
#include "locshap/sampling.h"
#include "locshap/support.h"
#include "locshap/types.h"

namespace locshap {

// Product-moment correlation. Throws ValidationError for mismatched lengths,
// fewer than two points or zero variance.
double pearson(std::span<const double> x, std::span<const double> y);
// Pearson correlation of average ranks.
double spearman(std::span<const double> x, std::span<const double> y);
// 1-based ranks; tied entries share the mean of their positions.
std::vector<double> fractional_ranks(std::span<const double> x);

// P(X >= successes) for X ~ Binomial(trials, 1/2).
double sign_test_p_value(int successes, int trials);
// Upper tail of the chi-square distribution.
double chi_square_p_value(double statistic, int degrees_of_freedom);

// Fraction of tests whose argmax prediction matches the label.
double accuracy(const FittedModel& model, std::span<const TestPoint> tests);

struct SelectionCurve {
  std::vector<double> fractions;
  std::vector<double> accuracies;
};

// Training ids by descending value, ties by ascending id.
std::vector<int> rank_by_value(std::span<const double> values);

// For each fraction f, trains on the ceil(f |D|) highest-valued points and
// records test accuracy.
SelectionCurve selection_curve(std::span<const double> values,
                               const ModelFamily& family, const Dataset& data,
                               std::span<const TestPoint> tests,
                               std::span<const double> fractions);

inline constexpr std::string_view kMethodNames[] = {
    "oracle",   "local-baseline", "subset-centric", "lsmr",  "global-mc",
    "local-mc", "tmc",            "comple-s",       "lsmr-a"};

bool is_method(std::string_view name);

// Runs one named valuation method. `oracle` is the original game; local
// methods restrict it to `supports` themselves.
ValuationResult run_method(std::string_view method, const UtilityOracle& oracle,
                           const SupportMap& supports,
                           const ExactOptions& exact,
                           const SamplerConfig& sampler);

struct CostRow {
  std::string method;
  std::int64_t fits = 0;
  std::int64_t evaluations = 0;
  std::int64_t samples = 0;
  double seconds = 0.0;
};

using CostLadder = std::vector<CostRow>;

CostLadder cost_ladder(const UtilityOracle& oracle, const SupportMap& supports,
                       std::span<const std::string> methods,
                       const ExactOptions& exact, const SamplerConfig& sampler);

struct Instance {
  Dataset data;
  TestSet tests;
};

struct ScalingRow {
  int num_training = 0;
  std::string method;
  std::int64_t fits = 0;
  std::int64_t evaluations = 0;
  double seconds = 0.0;
};

// Runs every method on every instance; supports come from `family`'s
// reference model on each instance.
std::vector<ScalingRow> scaling_study(const ModelFamily& family,
                                      std::span<const Instance> instances,
                                      std::span<const std::string> methods,
                                      const ExactOptions& exact,
                                      const SamplerConfig& sampler);

}  // namespace locshap

#endif  // LOCSHAP_ANALYSIS_H_
