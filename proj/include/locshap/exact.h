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

#ifndef LOCSHAP_EXACT_H_
#define LOCSHAP_EXACT_H_

#include <vector>

#include "locshap/coalition.h"
#include "locshap/oracle.h"
#include "locshap/result.h"
#include "locshap/support.h"
#include "locshap/utility_cache.h"

namespace locshap {

struct ExactOptions {
  // Largest player set that may be enumerated (|D| for the global method,
  // |N(t)| for the local ones).
  int enumeration_limit = 20;
  // Fill ValuationResult::per_test.
  bool keep_per_test = false;
  // local_baseline only: memoize fits across z and t instead of retraining
  // for every evaluation.
  bool use_cache = false;
  int workers = 1;
};

// Shapley values of the full game over all of D, summed over tests. Trains
// once per subset of D.
ValuationResult global_shapley_brute(const UtilityOracle& oracle,
                                     const ExactOptions& options = {});

// Per-test Shapley over N(t) by marginal contributions; one training per
// evaluation unless options.use_cache is set.
ValuationResult local_baseline(const UtilityOracle& oracle,
                               const SupportMap& supports,
                               const ExactOptions& options = {});

// Same values from one evaluation per subset of each N(t).
ValuationResult subset_centric(const UtilityOracle& oracle,
                               const SupportMap& supports,
                               const ExactOptions& options = {});

// Same values, training each distinct subset of the union of support power
// sets exactly once. The pivot test of a subset (first eligible test under
// `order`) owns its fit; the result is credited to every eligible test.
ValuationResult lsmr(const UtilityOracle& oracle, const SupportMap& supports,
                     UtilityCache& cache, const ExactOptions& options = {});
ValuationResult lsmr(const UtilityOracle& oracle, const SupportMap& supports,
                     UtilityCache& cache, const TestOrder& order,
                     const ExactOptions& options = {});

struct SubsetFamily {
  std::vector<Coalition> subsets;  // SizeLexLess order
  std::size_t size() const { return subsets.size(); }
};

// Union over tests of the power set of N(t), deduplicated.
SubsetFamily enumerate_distinct_subsets(const SupportMap& supports,
                                        int enumeration_limit = 20);

// Coefficient of v_t(S) in the value of one player z within an n-player
// game: +1/(n C(n-1, |S|-1)) when z is in S, -1/(n C(n-1, |S|)) otherwise.
double subset_weight(int n, int subset_size, bool contains_player);

}  // namespace locshap

#endif  // LOCSHAP_EXACT_H_
