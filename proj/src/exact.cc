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

#include "locshap/exact.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <string>
#include <unordered_set>

#include "locshap/binomial.h"
#include "locshap/parallel.h"
#include "locshap/types.h"

namespace locshap {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_support_sizes(const SupportMap& supports, int limit) {
  for (int t = 0; t < supports.num_tests(); ++t) {
    const int n = static_cast<int>(supports.of(t).size());
    if (n > limit) {
      throw SizeLimitError("support of test " + std::to_string(t) + " has " +
                           std::to_string(n) + " points; enumeration limit is " +
                           std::to_string(limit));
    }
  }
}

void check_shapes(const UtilityOracle& oracle, const SupportMap& supports) {
  if (supports.num_tests() != oracle.num_tests() ||
      supports.num_training() != oracle.num_players()) {
    throw ValidationError("support map shape does not match the game");
  }
}

ValuationResult start_result(const char* method, const UtilityOracle& oracle,
                             bool keep_per_test) {
  ValuationResult r;
  r.method = method;
  r.values.assign(oracle.num_players(), 0.0);
  r.converged = true;
  if (keep_per_test) r.per_test.resize(oracle.num_tests());
  return r;
}

// Adds one test's local values (aligned with N(t)) into the result.
void commit_test(ValuationResult& r, int t, std::span<const int> players,
                 const std::vector<double>& local) {
  for (std::size_t i = 0; i < players.size(); ++i) {
    r.values[players[i]] += local[i];
  }
  if (!r.per_test.empty()) {
    for (std::size_t i = 0; i < players.size(); ++i) {
      r.per_test[t].emplace_back(players[i], local[i]);
    }
  }
}

Coalition from_mask(std::span<const int> players, std::uint64_t mask) {
  std::vector<int> ids;
  for (std::size_t i = 0; i < players.size(); ++i) {
    if (mask >> i & 1) ids.push_back(players[i]);
  }
  return Coalition::from_sorted(std::move(ids));
}

}  // namespace

double subset_weight(int n, int subset_size, bool contains_player) {
  if (contains_player) return 1.0 / (n * binomial(n - 1, subset_size - 1));
  return -1.0 / (n * binomial(n - 1, subset_size));
}

ValuationResult global_shapley_brute(const UtilityOracle& oracle,
                                     const ExactOptions& options) {
  const auto start = Clock::now();
  const int d = oracle.num_players();
  const int num_tests = oracle.num_tests();
  if (d > options.enumeration_limit || d > 62) {
    throw SizeLimitError("global enumeration over " + std::to_string(d) +
                         " points exceeds the limit of " +
                         std::to_string(options.enumeration_limit));
  }
  ValuationResult r = start_result("oracle", oracle, options.keep_per_test);
  const std::uint64_t masks = std::uint64_t{1} << d;
  std::vector<int> players(d);
  for (int i = 0; i < d; ++i) players[i] = i;
  std::vector<int> all_tests(num_tests);
  for (int t = 0; t < num_tests; ++t) all_tests[t] = t;

  // Per-test utilities are kept only when the decomposition is requested;
  // otherwise the summed game is enough.
  const int width = options.keep_per_test ? num_tests : 1;
  std::vector<double> table(masks * width);
  parallel_for(masks, options.workers, [&](std::size_t mask) {
    Evaluation e = oracle.evaluate(from_mask(players, mask), all_tests);
    if (options.keep_per_test) {
      for (int t = 0; t < num_tests; ++t) table[mask * width + t] = e.utilities[t];
    } else {
      double sum = 0.0;
      for (double u : e.utilities) sum += u;
      table[mask] = sum;
    }
  });

  std::vector<double> weight(d);
  for (int k = 0; k < d; ++k) weight[k] = 1.0 / (d * binomial(d - 1, k));
  for (int col = 0; col < width; ++col) {
    std::vector<double> local(d, 0.0);
    for (int z = 0; z < d; ++z) {
      const std::uint64_t bit = std::uint64_t{1} << z;
      double acc = 0.0;
      for (std::uint64_t mask = 0; mask < masks; ++mask) {
        if (mask & bit) continue;
        const int k = std::popcount(mask);
        acc += (table[(mask | bit) * width + col] - table[mask * width + col]) *
               weight[k];
      }
      local[z] = acc;
    }
    if (options.keep_per_test) {
      commit_test(r, col, players, local);
    } else {
      for (int z = 0; z < d; ++z) r.values[z] = local[z];
    }
  }
  r.trainings = static_cast<std::int64_t>(masks);
  r.evaluations = static_cast<std::int64_t>(num_tests) * d *
                  static_cast<std::int64_t>(masks);
  r.elapsed_seconds = seconds_since(start);
  return r;
}

ValuationResult local_baseline(const UtilityOracle& oracle,
                               const SupportMap& supports,
                               const ExactOptions& options) {
  const auto start = Clock::now();
  check_shapes(oracle, supports);
  check_support_sizes(supports, options.enumeration_limit);
  ValuationResult r = start_result("local-baseline", oracle, options.keep_per_test);
  UtilityCache cache(oracle.utility_bound());
  std::atomic<std::int64_t> fits{0};

  for (int t = 0; t < oracle.num_tests(); ++t) {
    auto players = supports.of(t);
    const int n = static_cast<int>(players.size());
    std::vector<double> local(n, 0.0);
    const int one[] = {t};
    auto v = [&](const Coalition& s) {
      if (!options.use_cache) {
        ++fits;
        return oracle.evaluate(s, one).utilities.front();
      }
      // Cached fits keep one utility per test so later tests reuse them.
      std::vector<int> row_tests(oracle.num_tests());
      for (int i = 0; i < oracle.num_tests(); ++i) row_tests[i] = i;
      auto row = cache.lookup_or_fit(s, [&] {
        Evaluation e = oracle.evaluate(s, row_tests);
        return UtilityRow{row_tests, std::move(e.utilities)};
      });
      return row->at(t);
    };
    for (int i = 0; i < n; ++i) {
      std::vector<int> others;
      for (int j = 0; j < n; ++j) {
        if (j != i) others.push_back(players[j]);
      }
      const std::uint64_t masks = std::uint64_t{1} << (n - 1);
      std::vector<double> marginal(masks);
      parallel_for(masks, options.workers, [&](std::size_t mask) {
        Coalition s = from_mask(others, mask);
        marginal[mask] = v(s.with(players[i])) - v(s);
      });
      double acc = 0.0;
      for (std::uint64_t mask = 0; mask < masks; ++mask) {
        acc += marginal[mask] / (n * binomial(n - 1, std::popcount(mask)));
      }
      local[i] = acc;
    }
    commit_test(r, t, players, local);
    r.evaluations += static_cast<std::int64_t>(n) << n;
  }
  r.trainings = options.use_cache ? cache.trainings() : fits.load();
  r.elapsed_seconds = seconds_since(start);
  return r;
}

ValuationResult subset_centric(const UtilityOracle& oracle,
                               const SupportMap& supports,
                               const ExactOptions& options) {
  const auto start = Clock::now();
  check_shapes(oracle, supports);
  check_support_sizes(supports, options.enumeration_limit);
  ValuationResult r = start_result("subset-centric", oracle, options.keep_per_test);

  for (int t = 0; t < oracle.num_tests(); ++t) {
    auto players = supports.of(t);
    const int n = static_cast<int>(players.size());
    std::vector<Coalition> subsets = all_subsets(players);
    std::vector<double> utility(subsets.size());
    const int one[] = {t};
    parallel_for(subsets.size(), options.workers, [&](std::size_t i) {
      utility[i] = oracle.evaluate(subsets[i], one).utilities.front();
    });
    std::vector<double> local(n, 0.0);
    for (std::size_t s = 0; s < subsets.size(); ++s) {
      for (int i = 0; i < n; ++i) {
        local[i] += subset_weight(n, subsets[s].size(),
                                  subsets[s].contains(players[i])) *
                    utility[s];
      }
    }
    commit_test(r, t, players, local);
    r.evaluations += static_cast<std::int64_t>(subsets.size());
  }
  r.trainings = r.evaluations;
  r.elapsed_seconds = seconds_since(start);
  return r;
}

ValuationResult lsmr(const UtilityOracle& oracle, const SupportMap& supports,
                     UtilityCache& cache, const ExactOptions& options) {
  return lsmr(oracle, supports, cache, TestOrder::ascending(oracle.num_tests()),
              options);
}

ValuationResult lsmr(const UtilityOracle& oracle, const SupportMap& supports,
                     UtilityCache& cache, const TestOrder& order,
                     const ExactOptions& options) {
  const auto start = Clock::now();
  check_shapes(oracle, supports);
  check_support_sizes(supports, options.enumeration_limit);
  if (order.size() != oracle.num_tests()) {
    throw ValidationError("test order does not cover every test");
  }
  ValuationResult r = start_result("lsmr", oracle, options.keep_per_test);
  const ReverseIndex reverse = build_reverse_index(supports, oracle.num_players());
  const std::int64_t trainings_before = cache.trainings();

  // Phase 1: each test claims the subsets of its support it is pivot for.
  struct Owned {
    Coalition subset;
    std::vector<int> audience;  // R_S, ascending
  };
  std::vector<Owned> owned;
  for (int t : order.sequence()) {
    for (Coalition& s : all_subsets(supports.of(t))) {
      std::vector<int> audience = eligible_tests(s, reverse);
      if (pivot_of(audience, order) == t) {
        owned.push_back({std::move(s), std::move(audience)});
      }
    }
  }

  // Phase 2: one fit per owned subset.
  std::vector<std::shared_ptr<const UtilityRow>> rows(owned.size());
  parallel_for(owned.size(), options.workers, [&](std::size_t i) {
    const Owned& o = owned[i];
    rows[i] = cache.lookup_or_fit(o.subset, [&] {
      Evaluation e = oracle.evaluate(o.subset, o.audience);
      return UtilityRow{o.audience, std::move(e.utilities)};
    });
  });

  // Phase 3: credit every eligible test, in claim order.
  std::vector<std::vector<double>> local(oracle.num_tests());
  for (int t = 0; t < oracle.num_tests(); ++t) local[t].assign(supports.of(t).size(), 0.0);
  for (std::size_t i = 0; i < owned.size(); ++i) {
    const Owned& o = owned[i];
    for (int t : o.audience) {
      const double u = rows[i]->at(t);
      auto players = supports.of(t);
      const int n = static_cast<int>(players.size());
      for (int j = 0; j < n; ++j) {
        local[t][j] += subset_weight(n, o.subset.size(),
                                     o.subset.contains(players[j])) * u;
      }
      ++r.evaluations;
    }
  }
  for (int t = 0; t < oracle.num_tests(); ++t) commit_test(r, t, supports.of(t), local[t]);
  r.trainings = cache.trainings() - trainings_before;
  r.elapsed_seconds = seconds_since(start);
  return r;
}

SubsetFamily enumerate_distinct_subsets(const SupportMap& supports,
                                        int enumeration_limit) {
  check_support_sizes(supports, enumeration_limit);
  std::unordered_set<Coalition, CoalitionHash> seen;
  SubsetFamily family;
  for (int t = 0; t < supports.num_tests(); ++t) {
    for (Coalition& s : all_subsets(supports.of(t))) {
      if (seen.insert(s).second) family.subsets.push_back(std::move(s));
    }
  }
  std::sort(family.subsets.begin(), family.subsets.end(), SizeLexLess());
  return family;
}

}  // namespace locshap
