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

#include "locshap/analysis.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace locshap {
namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ValidationError("correlation: vectors differ in length");
  }
  if (x.size() < 2) throw ValidationError("correlation: need at least two points");
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    throw ValidationError("correlation undefined: zero variance");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> fractional_ranks(std::span<const double> x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double mean_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  auto rx = fractional_ranks(x);
  auto ry = fractional_ranks(y);
  return pearson(rx, ry);
}

double sign_test_p_value(int successes, int trials) {
  if (trials < 0 || successes < 0 || successes > trials) {
    throw ValidationError("sign test: need 0 <= successes <= trials");
  }
  if (successes == 0) return 1.0;
  boost::math::binomial_distribution<double> dist(trials, 0.5);
  return boost::math::cdf(boost::math::complement(dist, successes - 1));
}

double chi_square_p_value(double statistic, int degrees_of_freedom) {
  if (degrees_of_freedom < 1) throw ValidationError("chi-square: dof must be >= 1");
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * degrees_of_freedom, 0.5 * statistic);
}

double accuracy(const FittedModel& model, std::span<const TestPoint> tests) {
  if (tests.empty()) return 0.0;
  int correct = 0;
  for (const TestPoint& t : tests) {
    if (model.predict(t.features) == t.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(tests.size());
}

std::vector<int> rank_by_value(std::span<const double> values) {
  std::vector<int> ids(values.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::stable_sort(ids.begin(), ids.end(),
                   [&](int a, int b) { return values[a] > values[b]; });
  return ids;
}

SelectionCurve selection_curve(std::span<const double> values,
                               const ModelFamily& family, const Dataset& data,
                               std::span<const TestPoint> tests,
                               std::span<const double> fractions) {
  if (static_cast<int>(values.size()) != data.size()) {
    throw ValidationError("selection: one value per training point required");
  }
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    if (!(fractions[i] > 0.0 && fractions[i] <= 1.0) ||
        (i > 0 && !(fractions[i] > fractions[i - 1]))) {
      throw ValidationError("selection: fractions must increase within (0, 1]");
    }
  }
  const std::vector<int> order = rank_by_value(values);
  SelectionCurve curve;
  for (double f : fractions) {
    // The small slack keeps f * |D| that is integral in exact arithmetic
    // from rounding up.
    const auto take = static_cast<std::size_t>(
        std::min<double>(data.size(), std::ceil(f * data.size() - 1e-9)));
    Coalition chosen(std::vector<int>(order.begin(), order.begin() + take));
    curve.fractions.push_back(f);
    curve.accuracies.push_back(accuracy(fit(family, data, chosen), tests));
  }
  return curve;
}

bool is_method(std::string_view name) {
  return std::find(std::begin(kMethodNames), std::end(kMethodNames), name) !=
         std::end(kMethodNames);
}

ValuationResult run_method(std::string_view method, const UtilityOracle& oracle,
                           const SupportMap& supports,
                           const ExactOptions& exact,
                           const SamplerConfig& sampler) {
  if (method == "oracle") return global_shapley_brute(oracle, exact);
  if (method == "local-baseline") return local_baseline(oracle, supports, exact);
  if (method == "subset-centric") return subset_centric(oracle, supports, exact);
  if (method == "lsmr") {
    UtilityCache cache(oracle.utility_bound());
    return lsmr(oracle, supports, cache, exact);
  }
  if (method == "global-mc") return global_mc(oracle, sampler).result;
  if (method == "local-mc") return local_mc(oracle, supports, sampler).result;
  if (method == "tmc") return tmc(oracle, sampler).result;
  if (method == "comple-s") return comple_s(oracle, sampler).result;
  if (method == "lsmr-a") {
    UtilityCache cache(oracle.utility_bound());
    return lsmr_a(oracle, supports, cache, sampler).result;
  }
  throw ValidationError("unknown method '" + std::string(method) + "'");
}

CostLadder cost_ladder(const UtilityOracle& oracle, const SupportMap& supports,
                       std::span<const std::string> methods,
                       const ExactOptions& exact, const SamplerConfig& sampler) {
  CostLadder ladder;
  for (const std::string& m : methods) {
    ValuationResult r = run_method(m, oracle, supports, exact, sampler);
    ladder.push_back({m, r.trainings, r.evaluations, r.samples_used,
                      r.elapsed_seconds});
  }
  return ladder;
}

std::vector<ScalingRow> scaling_study(const ModelFamily& family,
                                      std::span<const Instance> instances,
                                      std::span<const std::string> methods,
                                      const ExactOptions& exact,
                                      const SamplerConfig& sampler) {
  for (std::size_t i = 1; i < instances.size(); ++i) {
    if (instances[i].data.size() <= instances[i - 1].data.size()) {
      throw ValidationError("scaling: instance sizes must increase");
    }
  }
  std::vector<ScalingRow> rows;
  for (const Instance& inst : instances) {
    ModelOracle oracle(family, inst.data, inst.tests);
    SupportMap supports = build_support_map(family, inst.data, inst.tests);
    for (const std::string& m : methods) {
      ValuationResult r = run_method(m, oracle, supports, exact, sampler);
      rows.push_back({inst.data.size(), m, r.trainings, r.evaluations,
                      r.elapsed_seconds});
    }
  }
  return rows;
}

}  // namespace locshap
