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

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "locshap/exact.h"
#include "locshap/models.h"
#include "test_util.h"

namespace locshap {
namespace {

constexpr double kTol = 1e-9;

FunctionOracle glove_game() {
  // Player 0 holds the left glove, players 1 and 2 right gloves.
  return FunctionOracle(3, 1, [](const Coalition& c, int) {
    return c.contains(0) && (c.contains(1) || c.contains(2)) ? 1.0 : 0.0;
  });
}

void expect_values_near(const std::vector<double>& a, const std::vector<double>& b,
                        double tol = kTol) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], tol) << "point " << i;
}

TEST(GlobalBruteTest, GloveGame) {
  ValuationResult r = global_shapley_brute(glove_game());
  EXPECT_NEAR(r.values[0], 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.values[1], 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(r.values[2], 1.0 / 6.0, 1e-12);
  EXPECT_EQ(r.trainings, 8);
}

TEST(GlobalBruteTest, NullPlayerAndSinglePlayer) {
  FunctionOracle ignores_two(3, 2, [](const Coalition& c, int t) {
    return 0.3 * c.contains(0) + 0.1 * t * c.contains(1);
  });
  EXPECT_EQ(global_shapley_brute(ignores_two).values[2], 0.0);
  FunctionOracle single(1, 1, [](const Coalition& c, int) { return c.empty() ? 0.0 : 1.0; });
  EXPECT_NEAR(global_shapley_brute(single).values[0], 1.0, 1e-12);
}

TEST(GlobalBruteTest, SizeLimit) {
  FunctionOracle big = random_game(21, 1, 0);
  EXPECT_THROW(global_shapley_brute(big), SizeLimitError);
  ExactOptions small;
  small.enumeration_limit = 4;
  EXPECT_THROW(global_shapley_brute(random_game(5, 1, 0), small), SizeLimitError);
}

TEST(GlobalBruteTest, PerTestDecompositionSumsToTotal) {
  FunctionOracle g = random_game(6, 3, 2);
  ExactOptions keep;
  keep.keep_per_test = true;
  ValuationResult with = global_shapley_brute(g, keep);
  ValuationResult without = global_shapley_brute(g);
  expect_values_near(with.values, without.values, 1e-12);
  ASSERT_EQ(with.per_test.size(), 3u);
}

TEST(LocalBaselineTest, OutsideEverySupportIsZero) {
  FunctionOracle g = random_game(5, 2, 3);
  SupportMap s(5, {{0, 1}, {1, 2}});
  ValuationResult r = local_baseline(g, s);
  EXPECT_EQ(r.values[3], 0.0);
  EXPECT_EQ(r.values[4], 0.0);
}

TEST(LocalBaselineTest, OnePlayerSupport) {
  FunctionOracle g = random_game(3, 1, 4);
  SupportMap s(3, {{2}});
  ValuationResult r = local_baseline(g, s);
  EXPECT_NEAR(r.values[2], g.value(Coalition{2}, 0) - g.value(Coalition(), 0), 1e-15);
}

TEST(LocalBaselineTest, MatchesBruteForceOnProjectedGame) {
  FunctionOracle g = random_game(6, 1, 5);
  SupportMap s(6, {{0, 1, 2, 3, 4, 5}});
  ProjectedOracle projected(g, s);
  expect_values_near(local_baseline(g, s).values, global_shapley_brute(projected).values);
}

TEST(LocalBaselineTest, EvaluationCountIsNTimesTwoToN) {
  FunctionOracle g = random_game(8, 3, 6);
  SupportMap s(8, {{0, 1, 2}, {3}, {}});
  ValuationResult r = local_baseline(g, s);
  EXPECT_EQ(r.evaluations, 3 * 8 + 1 * 2 + 0);
  EXPECT_EQ(r.trainings, r.evaluations);
  ExactOptions cached;
  cached.use_cache = true;
  ValuationResult rc = local_baseline(g, s, cached);
  EXPECT_EQ(rc.evaluations, r.evaluations);
  EXPECT_EQ(rc.trainings, 8 + 1);  // P({0,1,2}) plus {3}; the empty set is shared
  expect_values_near(rc.values, r.values, 0.0);
}

TEST(LocalBaselineTest, SupportOverLimitIsSizeError) {
  FunctionOracle g = random_game(5, 1, 7);
  SupportMap s(5, {{0, 1, 2, 3, 4}});
  ExactOptions o;
  o.enumeration_limit = 4;
  EXPECT_THROW(local_baseline(g, s, o), SizeLimitError);
  EXPECT_THROW(subset_centric(g, s, o), SizeLimitError);
  UtilityCache cache;
  EXPECT_THROW(lsmr(g, s, cache, o), SizeLimitError);
  EXPECT_THROW(enumerate_distinct_subsets(s, 4), SizeLimitError);
}

TEST(SubsetCentricTest, Coefficients) {
  EXPECT_NEAR(subset_weight(3, 1, true), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(subset_weight(3, 0, false), -1.0 / 3.0, 1e-15);
  EXPECT_NEAR(subset_weight(3, 3, true), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(subset_weight(4, 2, false), -1.0 / 12.0, 1e-15);
}

TEST(SubsetCentricTest, EqualsLocalBaselineOnEightPoints) {
  FunctionOracle g = random_game(8, 2, 8);
  SupportMap s(8, {{0, 1, 2, 3, 4, 5, 6, 7}, {1, 3, 5}});
  ValuationResult sc = subset_centric(g, s);
  expect_values_near(sc.values, local_baseline(g, s).values);
  EXPECT_EQ(sc.evaluations, 256 + 8);
}

TEST(LsmrTest, IdenticalSupportsShareEveryFit) {
  FunctionOracle g = random_game(5, 2, 9);
  SupportMap s(5, {{0, 2, 4}, {0, 2, 4}});
  UtilityCache cache;
  ValuationResult r = lsmr(g, s, cache);
  EXPECT_EQ(r.trainings, 8);
  expect_values_near(r.values, subset_centric(g, s).values);
}

TEST(LsmrTest, OverlappingPairNeedsSixFits) {
  FunctionOracle g = random_game(3, 2, 10);
  SupportMap s(3, {{0, 1}, {1, 2}});
  UtilityCache cache;
  ValuationResult r = lsmr(g, s, cache);
  EXPECT_EQ(r.trainings, 6);
  EXPECT_EQ(enumerate_distinct_subsets(s).size(), 6u);
  expect_values_near(r.values, subset_centric(g, s).values);
}

TEST(LsmrTest, FitsEqualDistinctSubsetsAndRespectBound) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SupportMap s = testing::random_supports(10, 6, 0, 6, seed);
    FunctionOracle g = random_game(10, 6, seed);
    UtilityCache cache;
    ValuationResult r = lsmr(g, s, cache);
    const auto distinct = static_cast<std::int64_t>(enumerate_distinct_subsets(s).size());
    EXPECT_EQ(r.trainings, distinct);
    std::int64_t per_test = 0;
    for (int t = 0; t < 6; ++t) per_test += std::int64_t{1} << s.of(t).size();
    EXPECT_LE(r.trainings, std::min<std::int64_t>(per_test, 1 << 10));
    EXPECT_EQ(r.evaluations, per_test);
  }
}

TEST(LsmrTest, WorkerCountDoesNotChangeValues) {
  SupportMap s = testing::random_supports(12, 5, 3, 7, 3);
  FunctionOracle g = random_game(12, 5, 3);
  UtilityCache c1, c4;
  ExactOptions one, four;
  four.workers = 4;
  ValuationResult a = lsmr(g, s, c1, one), b = lsmr(g, s, c4, four);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.trainings, b.trainings);
}

TEST(LsmrTest, CustomOrderChangesOwnersNotValues) {
  SupportMap s = testing::random_supports(9, 4, 2, 5, 12);
  FunctionOracle g = random_game(9, 4, 12);
  UtilityCache c1, c2;
  ValuationResult a = lsmr(g, s, c1);
  ValuationResult b = lsmr(g, s, c2, TestOrder({3, 1, 0, 2}));
  expect_values_near(a.values, b.values);
  EXPECT_EQ(a.trainings, b.trainings);
}

TEST(EnumerateTest, SmallFamilies) {
  EXPECT_EQ(enumerate_distinct_subsets(SupportMap(1, {{0}})).size(), 2u);
  std::vector<std::vector<int>> same(7, std::vector<int>{0, 1, 2, 3});
  EXPECT_EQ(enumerate_distinct_subsets(SupportMap(4, same)).size(), 16u);
  auto fam = enumerate_distinct_subsets(SupportMap(3, {{0, 1}, {1, 2}}));
  std::vector<Coalition> expected = {Coalition(), Coalition{0}, Coalition{1}, Coalition{2},
                                     Coalition{0, 1}, Coalition{1, 2}};
  EXPECT_EQ(fam.subsets, expected);
}

TEST(AxiomTest, LocalEfficiencyPerTest) {
  SupportMap s = testing::random_supports(9, 4, 1, 6, 31);
  FunctionOracle g = random_game(9, 4, 31);
  UtilityCache cache;
  ExactOptions keep;
  keep.keep_per_test = true;
  ValuationResult r = lsmr(g, s, cache, keep);
  for (int t = 0; t < 4; ++t) {
    double sum = 0.0;
    for (auto [z, v] : r.per_test[t]) sum += v;
    auto n = s.of(t);
    const double expected = g.value(Coalition(std::vector<int>(n.begin(), n.end())), t) -
                            g.value(Coalition(), t);
    EXPECT_NEAR(sum, expected, kTol);
  }
}

TEST(AxiomTest, Additivity) {
  SupportMap s = testing::random_supports(8, 3, 2, 5, 41);
  FunctionOracle a = random_game(8, 3, 1), b = random_game(8, 3, 2);
  SumOracle sum(a, b);
  UtilityCache ca, cb, cs(sum.utility_bound());
  ValuationResult va = lsmr(a, s, ca), vb = lsmr(b, s, cb), vs = lsmr(sum, s, cs);
  for (int z = 0; z < 8; ++z) EXPECT_NEAR(vs.values[z], va.values[z] + vb.values[z], kTol);
}

TEST(AxiomTest, DuplicatePointsGetEqualValues) {
  Instance inst = testing::blobs(5, 3, 17);
  inst.data.points.push_back({inst.data.size(), inst.data.points[2].features,
                              inst.data.points[2].label});
  ModelFamily family = ModelFamily::kernel(0.2);
  ModelOracle oracle(family, inst.data, inst.tests);
  SupportMap s = build_support_map(family, inst.data, inst.tests);
  UtilityCache cache;
  ValuationResult r = lsmr(oracle, s, cache);
  EXPECT_NEAR(r.values[2], r.values[inst.data.size() - 1], kTol);
}

TEST(ExactLocalityCollapseTest, KernelLsmrEqualsGlobalBrute) {
  Instance inst = testing::blobs(5, 2, 23);
  ModelFamily family = ModelFamily::kernel(0.4);
  ModelOracle oracle(family, inst.data, inst.tests);
  SupportMap s = build_support_map(family, inst.data, inst.tests);
  UtilityCache cache;
  expect_values_near(lsmr(oracle, s, cache).values, global_shapley_brute(oracle).values);
}

TEST(AmortizedDecayTest, FitsPerTestShrinkWithFixedPool) {
  const std::vector<std::vector<int>> pool = {{0, 1, 2}, {2, 3}, {4, 5, 6}, {1, 6}};
  double last = 1e9;
  for (int tests : {4, 16, 64}) {
    std::vector<std::vector<int>> supports;
    for (int t = 0; t < tests; ++t) supports.push_back(pool[t % pool.size()]);
    SupportMap s(7, supports);
    UtilityCache cache;
    ValuationResult r = lsmr(random_game(7, tests, 1), s, cache);
    const double per_test = static_cast<double>(r.trainings) / tests;
    EXPECT_LT(per_test, last);
    last = per_test;
  }
}

}  // namespace
}  // namespace locshap
