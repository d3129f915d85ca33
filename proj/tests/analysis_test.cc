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

#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "locshap/analysis.h"
#include "locshap/rng.h"
#include "test_util.h"

namespace locshap {
namespace {

// Direct average-rank definition: 1 + #smaller + (#equal - 1) / 2.
std::vector<double> brute_ranks(const std::vector<double>& x) {
  std::vector<double> r;
  for (double a : x) {
    double less = 0, equal = 0;
    for (double b : x) {
      less += b < a;
      equal += b == a;
    }
    r.push_back(1.0 + less + (equal - 1.0) / 2.0);
  }
  return r;
}

TEST(PearsonTest, IdentityReflectionAndHandCase) {
  const std::vector<double> x = {1, 2, 3, 4};
  std::vector<double> neg(x.size());
  std::transform(x.begin(), x.end(), neg.begin(), [](double v) { return -v; });
  EXPECT_NEAR(pearson(x, x), 1.0, 1e-15);
  EXPECT_NEAR(pearson(x, neg), -1.0, 1e-15);
  const std::vector<double> a = {1, 2, 3}, b = {2, 4, 7};
  EXPECT_NEAR(pearson(a, b), 0.9934, 1e-4);
}

TEST(PearsonTest, UndefinedInputsThrow) {
  const std::vector<double> flat = {1, 1, 1}, x = {1, 2, 3}, shorter = {1, 2};
  EXPECT_THROW(pearson(flat, x), ValidationError);
  EXPECT_THROW(pearson(x, shorter), ValidationError);
  const std::vector<double> one = {1};
  EXPECT_THROW(pearson(one, one), ValidationError);
  EXPECT_THROW(spearman(flat, x), ValidationError);
}

TEST(SpearmanTest, MonotoneTransformsAndReversal) {
  const std::vector<double> x = {0.3, -1.0, 2.5, 7.0, 0.0};
  std::vector<double> cubed(x.size()), reversed(x.size());
  std::transform(x.begin(), x.end(), cubed.begin(), [](double v) { return v * v * v + 4; });
  std::transform(x.begin(), x.end(), reversed.begin(), [](double v) { return -std::exp(v); });
  EXPECT_NEAR(spearman(x, cubed), 1.0, 1e-15);
  EXPECT_NEAR(spearman(x, reversed), -1.0, 1e-15);
}

TEST(SpearmanTest, TiedPairHandCase) {
  // Ranks (1, 2.5, 2.5, 4) and (2, 1, 3.5, 3.5).
  const std::vector<double> x = {1, 2, 2, 5}, y = {3, 1, 4, 4};
  EXPECT_EQ(fractional_ranks(x), (std::vector<double>{1, 2.5, 2.5, 4}));
  EXPECT_NEAR(spearman(x, y), 0.5, 1e-12);
}

TEST(SpearmanTest, MatchesBruteForceRanksOnSmallInputs) {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_index(5));
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = static_cast<double>(rng.uniform_index(3));
      y[i] = static_cast<double>(rng.uniform_index(4));
    }
    EXPECT_EQ(fractional_ranks(x), brute_ranks(x));
    auto rx = brute_ranks(x), ry = brute_ranks(y);
    bool degenerate = std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; }) ||
                      std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
    if (degenerate) continue;
    EXPECT_NEAR(spearman(x, y), pearson(rx, ry), 1e-12);
  }
}

TEST(StatisticsTest, TailProbabilities) {
  EXPECT_NEAR(sign_test_p_value(5, 6), 0.109375, 1e-12);
  EXPECT_NEAR(sign_test_p_value(6, 6), 1.0 / 64, 1e-12);
  EXPECT_EQ(sign_test_p_value(0, 6), 1.0);
  EXPECT_NEAR(chi_square_p_value(3.0, 7), 0.8850022316431506, 1e-10);
}

TEST(SelectionTest, FullFractionIsFullTrainingAccuracy) {
  Instance inst = testing::blobs(10, 5, 2);
  ModelFamily family = ModelFamily::wknn(3);
  std::vector<double> values(inst.data.size(), 0.0);
  const double fractions[] = {1.0};
  SelectionCurve curve = selection_curve(values, family, inst.data, inst.tests, fractions);
  std::vector<int> all(inst.data.size());
  std::iota(all.begin(), all.end(), 0);
  EXPECT_EQ(curve.accuracies[0],
            accuracy(fit(family, inst.data, Coalition(all)), inst.tests));
}

TEST(SelectionTest, EqualValuesFallBackToIdOrder) {
  const std::vector<double> equal(6, 0.25);
  EXPECT_EQ(rank_by_value(equal), (std::vector<int>{0, 1, 2, 3, 4, 5}));
  const std::vector<double> mixed = {0.1, 0.5, 0.1, 0.9};
  EXPECT_EQ(rank_by_value(mixed), (std::vector<int>{3, 1, 0, 2}));
}

TEST(SelectionTest, SelectionsAreNested) {
  const std::vector<double> values = {0.3, 0.1, 0.7, 0.7, -0.2, 0.0, 0.5};
  auto order = rank_by_value(values);
  // ceil(f * 7) prefixes of one fixed order.
  for (std::size_t i = 1; i < order.size(); ++i) {
    EXPECT_TRUE(values[order[i - 1]] > values[order[i]] ||
                (values[order[i - 1]] == values[order[i]] && order[i - 1] < order[i]));
  }
}

TEST(SelectionTest, RejectsBadFractions) {
  Instance inst = testing::blobs(3, 1, 2);
  std::vector<double> values(inst.data.size(), 0.0);
  const double bad[] = {0.5, 0.4};
  EXPECT_THROW(selection_curve(values, ModelFamily::wknn(), inst.data, inst.tests, bad),
               ValidationError);
}

TEST(SelectionTest, OracleValuesBeatRandomAtSmallFractions) {
  double oracle_total = 0.0, random_total = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Instance inst = testing::blobs(6, 6, seed, 2, 2.0);
    ModelFamily family = ModelFamily::wknn(3);
    ModelOracle oracle(family, inst.data, inst.tests);
    std::vector<double> values = global_shapley_brute(oracle).values;
    std::vector<double> noise(values.size());
    Rng rng(seed + 100);
    for (double& v : noise) v = rng.uniform01();
    const double fractions[] = {0.2, 0.3};
    auto good = selection_curve(values, family, inst.data, inst.tests, fractions);
    auto bad = selection_curve(noise, family, inst.data, inst.tests, fractions);
    oracle_total += good.accuracies[0] + good.accuracies[1];
    random_total += bad.accuracies[0] + bad.accuracies[1];
  }
  EXPECT_GT(oracle_total, random_total);
}

TEST(CostLadderTest, CountersFollowTheLadder) {
  Instance inst = testing::blobs(5, 4, 6);
  ModelFamily family = ModelFamily::wknn(2);
  ModelOracle oracle(family, inst.data, inst.tests);
  SupportMap s = build_support_map(family, inst.data, inst.tests);
  const std::vector<std::string> methods = {"lsmr", "subset-centric", "local-baseline",
                                            "oracle"};
  CostLadder ladder = cost_ladder(oracle, s, methods, {}, {});
  std::int64_t per_test = 0, baseline = 0;
  for (int t = 0; t < s.num_tests(); ++t) {
    const std::int64_t n = static_cast<std::int64_t>(s.of(t).size());
    per_test += std::int64_t{1} << n;
    baseline += n << n;
  }
  EXPECT_EQ(ladder[0].fits, static_cast<std::int64_t>(enumerate_distinct_subsets(s).size()));
  EXPECT_EQ(ladder[1].evaluations, per_test);
  EXPECT_EQ(ladder[2].evaluations, baseline);
  EXPECT_LE(ladder[0].fits, ladder[1].evaluations);
  EXPECT_LE(ladder[1].evaluations, ladder[2].evaluations);
  EXPECT_LE(ladder[2].evaluations, ladder[3].evaluations);
}

TEST(CostLadderTest, ReuseBeatsLocalMcOnOverlap) {
  Instance inst = testing::blobs(6, 8, 9, 2, 0.8);
  ModelFamily family = ModelFamily::wknn(2);
  ModelOracle oracle(family, inst.data, inst.tests);
  SupportMap s = build_support_map(family, inst.data, inst.tests);
  SamplerConfig c;
  c.max_samples = 200;
  c.stop_on_convergence = false;
  const std::vector<std::string> methods = {"lsmr-a", "local-mc"};
  CostLadder ladder = cost_ladder(oracle, s, methods, {}, c);
  EXPECT_LT(ladder[0].fits, ladder[1].fits);
  EXPECT_EQ(ladder[0].samples, ladder[1].samples);
}

TEST(ScalingTest, LsmrFitsDependOnlyOnSupports) {
  std::vector<Instance> instances;
  for (int per_class : {10, 20, 40}) instances.push_back(testing::blobs(per_class, 3, 5));
  const std::vector<std::string> methods = {"lsmr", "lsmr-a", "global-mc"};
  SamplerConfig c;
  c.max_samples = 200;
  auto rows = scaling_study(ModelFamily::wknn(2), instances, methods, {}, c);
  ASSERT_EQ(rows.size(), 9u);
  for (int i = 0; i < 3; ++i) {
    // Supports have 4 points each, so LSMR never needs more than 6 * 16 fits.
    EXPECT_LE(rows[3 * i].fits, 6 * 16);
    EXPECT_GT(rows[3 * i + 2].fits, rows[3 * i + 1].fits);
  }
  EXPECT_THROW(scaling_study(ModelFamily::wknn(2),
                             std::vector<Instance>{instances[1], instances[0]}, methods, {}, c),
               ValidationError);
}

TEST(RunMethodTest, UnknownMethod) {
  FunctionOracle g = random_game(2, 1, 0);
  SupportMap s(2, {{0}});
  EXPECT_THROW(run_method("shap", g, s, {}, {}), ValidationError);
  EXPECT_TRUE(is_method("lsmr-a"));
  EXPECT_FALSE(is_method("lsmr_a"));
}

}  // namespace
}  // namespace locshap
