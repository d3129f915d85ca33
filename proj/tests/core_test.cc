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

#include <atomic>
#include <set>
#include <stdexcept>
#include <thread>

#include <gtest/gtest.h>

#include "locshap/binomial.h"
#include "locshap/coalition.h"
#include "locshap/oracle.h"
#include "locshap/parallel.h"
#include "locshap/rng.h"
#include "locshap/support.h"
#include "locshap/types.h"
#include "locshap/utility_cache.h"
#include "test_util.h"

namespace locshap {
namespace {

TEST(CoalitionTest, CanonicalizesOrderAndDuplicates) {
  Coalition a({3, 1, 2, 3, 1});
  Coalition b({1, 2, 3});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_EQ(std::vector<int>(a.members().begin(), a.members().end()),
            (std::vector<int>{1, 2, 3}));
}

TEST(CoalitionTest, SetOperations) {
  Coalition c{2, 5};
  EXPECT_TRUE(c.contains(5));
  EXPECT_FALSE(c.contains(3));
  EXPECT_EQ(c.with(3), (Coalition{2, 3, 5}));
  EXPECT_EQ(c.with(5), c);
  EXPECT_EQ(c.without(2), (Coalition{5}));
  const int pool[] = {1, 2, 5, 9};
  EXPECT_TRUE(c.is_subset_of(pool));
  const int other[] = {2, 9};
  EXPECT_EQ(c.intersect(other), (Coalition{2}));
}

TEST(CoalitionTest, AllSubsetsInSizeThenLexOrder) {
  const int ids[] = {4, 7, 9};
  auto subsets = all_subsets(ids);
  ASSERT_EQ(subsets.size(), 8u);
  EXPECT_TRUE(subsets[0].empty());
  EXPECT_EQ(subsets[1], (Coalition{4}));
  EXPECT_EQ(subsets[3], (Coalition{9}));
  EXPECT_EQ(subsets[4], (Coalition{4, 7}));
  EXPECT_EQ(subsets[6], (Coalition{7, 9}));
  EXPECT_EQ(subsets[7], (Coalition{4, 7, 9}));
  EXPECT_TRUE(std::is_sorted(subsets.begin(), subsets.end(), SizeLexLess()));
}

TEST(ReverseIndexTest, InvertsTwoByTwo) {
  // a=0, b=1; t0:{a,b}, t1:{b}
  SupportMap s(2, {{0, 1}, {1}});
  ReverseIndex r = build_reverse_index(s, 2);
  EXPECT_EQ(std::vector<int>(r.of(0).begin(), r.of(0).end()), std::vector<int>{0});
  EXPECT_EQ(std::vector<int>(r.of(1).begin(), r.of(1).end()), (std::vector<int>{0, 1}));
}

TEST(ReverseIndexTest, EmptySupportMapGivesEmptyReverse) {
  SupportMap s(4, {});
  ReverseIndex r = build_reverse_index(s, 4);
  for (int z = 0; z < 4; ++z) EXPECT_TRUE(r.of(z).empty());
}

TEST(ReverseIndexTest, DoubleInversionRoundTrips) {
  SupportMap s = testing::random_supports(20, 10, 0, 8, 7);
  ReverseIndex r = build_reverse_index(s, 20);
  EXPECT_EQ(r.invert(), s);
  for (int z = 0; z < 20; ++z) {
    for (int t = 0; t < 10; ++t) {
      auto rz = r.of(z);
      EXPECT_EQ(std::binary_search(rz.begin(), rz.end(), t), s.contains(t, z));
    }
  }
}

TEST(ReverseIndexTest, RejectsOutOfRangeIds) {
  EXPECT_THROW(SupportMap(3, {{0, 3}}), ValidationError);
  EXPECT_THROW(SupportMap(3, {{-1}}), ValidationError);
}

TEST(EligibleTestsTest, EmptyCoalitionIsEveryTest) {
  SupportMap s(3, {{0, 1}, {1, 2}, {}});
  ReverseIndex r = build_reverse_index(s, 3);
  EXPECT_EQ(eligible_tests(Coalition(), r), (std::vector<int>{0, 1, 2}));
}

TEST(EligibleTestsTest, IntersectsReverseSets) {
  // a=0, b=1, c=2; t0:{a,b}, t1:{b,c}
  SupportMap s(3, {{0, 1}, {1, 2}});
  ReverseIndex r = build_reverse_index(s, 3);
  EXPECT_EQ(eligible_tests(Coalition{1}, r), (std::vector<int>{0, 1}));
  EXPECT_TRUE(eligible_tests(Coalition{0, 2}, r).empty());
}

TEST(EligibleTestsTest, MatchesBruteForceScan) {
  SupportMap s = testing::random_supports(12, 50, 2, 7, 11);
  ReverseIndex r = build_reverse_index(s, 12);
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> ids;
    const int size = static_cast<int>(rng.uniform_index(4));
    for (int i = 0; i < size; ++i) ids.push_back(static_cast<int>(rng.uniform_index(12)));
    Coalition c(ids);
    std::vector<int> expected;
    for (int t = 0; t < 50; ++t) {
      if (c.is_subset_of(s.of(t))) expected.push_back(t);
    }
    EXPECT_EQ(eligible_tests(c, r), expected);
  }
}

TEST(PivotTest, MinimumUnderOrder) {
  TestOrder ascending = TestOrder::ascending(8);
  const int eligible[] = {3, 1, 7};
  EXPECT_EQ(pivot_of(eligible, ascending), 1);
  EXPECT_EQ(pivot_of({}, ascending), std::nullopt);
  TestOrder custom({7, 0, 1, 2, 3, 4, 5, 6});
  EXPECT_EQ(pivot_of(eligible, custom), 7);
}

TEST(PivotTest, PivotIsFirstEligibleForRandomCoalitions) {
  SupportMap s = testing::random_supports(10, 30, 3, 6, 5);
  ReverseIndex r = build_reverse_index(s, 10);
  TestOrder order = TestOrder::ascending(30);
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    // Draw from a real support so R_S is usually non-empty.
    auto base = s.of(static_cast<int>(rng.uniform_index(30)));
    std::vector<int> ids;
    for (int z : base) {
      if (rng.uniform_index(2)) ids.push_back(z);
    }
    Coalition c(ids);
    auto eligible = eligible_tests(c, r);
    auto p = pivot(c, r, order);
    ASSERT_TRUE(p.has_value());
    EXPECT_TRUE(std::binary_search(eligible.begin(), eligible.end(), *p));
    for (int t : eligible) EXPECT_GE(order.rank(t), order.rank(*p));
  }
}

TEST(TestOrderTest, RejectsNonPermutation) {
  EXPECT_THROW(TestOrder({0, 0, 1}), ValidationError);
  EXPECT_THROW(TestOrder({0, 3}), ValidationError);
}

UtilityRow row_of(double v) { return UtilityRow{{0}, {v}}; }

TEST(UtilityCacheTest, SecondLookupDoesNotRefit) {
  UtilityCache cache;
  int calls = 0;
  auto fit = [&] {
    ++calls;
    return row_of(0.5);
  };
  bool fitted = false;
  cache.lookup_or_fit(Coalition{1, 2}, fit, &fitted);
  EXPECT_TRUE(fitted);
  cache.lookup_or_fit(Coalition{2, 1}, fit, &fitted);
  EXPECT_FALSE(fitted);
  EXPECT_EQ(calls, 1);
  EXPECT_EQ(cache.trainings(), 1);
}

TEST(UtilityCacheTest, CountsDistinctKeys) {
  UtilityCache cache;
  const int ids[] = {0, 1, 2, 3};
  auto subsets = all_subsets(ids);
  for (int rep = 0; rep < 3; ++rep) {
    for (const auto& s : subsets) cache.lookup_or_fit(s, [] { return row_of(0.1); });
  }
  EXPECT_EQ(cache.trainings(), 16);
}

TEST(UtilityCacheTest, FailedFitLeavesCacheUnchanged) {
  UtilityCache cache;
  EXPECT_THROW(cache.lookup_or_fit(Coalition{1},
                                   []() -> UtilityRow { throw std::runtime_error("boom"); }),
               std::runtime_error);
  EXPECT_EQ(cache.trainings(), 0);
  EXPECT_EQ(cache.find(Coalition{1}), nullptr);
  cache.lookup_or_fit(Coalition{1}, [] { return row_of(0.2); });
  EXPECT_EQ(cache.trainings(), 1);
}

TEST(UtilityCacheTest, RejectsUtilitiesAboveBound) {
  UtilityCache cache(1.0);
  EXPECT_THROW(cache.lookup_or_fit(Coalition{1}, [] { return row_of(1.5); }),
               ValidationError);
  EXPECT_EQ(cache.trainings(), 0);
}

TEST(UtilityCacheTest, ConcurrentRequestersFitOnce) {
  UtilityCache cache;
  std::atomic<int> calls{0};
  parallel_for(64, 8, [&](std::size_t i) {
    Coalition c{static_cast<int>(i % 4)};
    cache.lookup_or_fit(c, [&] {
      ++calls;
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
      return row_of(0.3);
    });
  });
  EXPECT_EQ(calls.load(), 4);
  EXPECT_EQ(cache.trainings(), 4);
}

TEST(UtilityRowTest, MissingTestThrows) {
  UtilityRow row{{1, 4}, {0.1, 0.2}};
  EXPECT_DOUBLE_EQ(row.at(4), 0.2);
  EXPECT_THROW(row.at(2), std::out_of_range);
}

TEST(BinomialTest, ExactAndLogPaths) {
  EXPECT_EQ(binomial(5, 2), 10.0);
  EXPECT_EQ(binomial(60, 30), 118264581564861424.0);
  EXPECT_EQ(binomial(4, 5), 0.0);
  EXPECT_EQ(binomial(4, -1), 0.0);
  EXPECT_NEAR(binomial(70, 3) / 54740.0, 1.0, 1e-12);
}

TEST(RngTest, StreamsAreReproducibleAndDistinct) {
  Rng a = Rng::for_stream(42, 1), b = Rng::for_stream(42, 1), c = Rng::for_stream(42, 2);
  const auto x = a.next();
  EXPECT_EQ(x, b.next());
  EXPECT_NE(x, c.next());
}

TEST(RngTest, UniformIndexCoversRange) {
  Rng rng(9);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 50000; ++i) ++counts[rng.uniform_index(5)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 400);
}

TEST(DatasetTest, ValidationCatchesBadInputs) {
  Dataset d;
  d.num_classes = 2;
  d.points = {{0, {0.0, 1.0}, 0}, {1, {1.0, 1.0}, 1}};
  EXPECT_NO_THROW(d.validate());
  d.points[1].label = 2;
  EXPECT_THROW(d.validate(), ValidationError);
  d.points[1].label = 1;
  d.points[1].features.pop_back();
  EXPECT_THROW(d.validate(), ValidationError);
  d.points[1].features.push_back(0.0);
  d.points[1].id = 5;
  EXPECT_THROW(d.validate(), ValidationError);
}

TEST(OracleTest, ProjectionRestrictsToSupport) {
  FunctionOracle game(4, 1, [](const Coalition& c, int) { return 0.1 * c.size(); });
  SupportMap s(4, {{1, 2}});
  ProjectedOracle projected(game, s);
  EXPECT_DOUBLE_EQ(projected.value(Coalition{0, 1, 2, 3}, 0), 0.2);
  EXPECT_DOUBLE_EQ(projected.value(Coalition{0, 3}, 0), 0.0);
}

TEST(OracleTest, RandomGameIsDeterministic) {
  FunctionOracle g = random_game(6, 3, 99);
  EXPECT_EQ(g.value(Coalition{1, 4}, 2), g.value(Coalition{4, 1}, 2));
  EXPECT_NE(g.value(Coalition{1, 4}, 2), g.value(Coalition{1, 4}, 1));
  const double v = g.value(Coalition{2}, 0);
  EXPECT_GE(v, 0.0);
  EXPECT_LT(v, 1.0);
}

}  // namespace
}  // namespace locshap
