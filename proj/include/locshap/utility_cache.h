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

#ifndef LOCSHAP_UTILITY_CACHE_H_
#define LOCSHAP_UTILITY_CACHE_H_

#include <condition_variable>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "locshap/coalition.h"

namespace locshap {

// Utilities of one trained model, for the test ids it was scored on.
struct UtilityRow {
  std::vector<int> tests;  // sorted
  std::vector<double> values;

  // Throws std::out_of_range when `test` was not scored.
  double at(int test) const;
};

// Memo of trained-subset utilities keyed by coalition. Safe for concurrent
// use: a coalition's fit procedure runs at most once; concurrent requesters
// of an in-flight coalition block until it lands.
class UtilityCache {
 public:
  using FitFn = std::function<UtilityRow()>;

  explicit UtilityCache(double utility_bound = 1.0);

  UtilityCache(const UtilityCache&) = delete;
  UtilityCache& operator=(const UtilityCache&) = delete;

  // Returns the cached row, or invokes `fit` once and stores its result.
  // If `fit` throws, the exception propagates and the cache is unchanged.
  // `fitted`, when given, is set to whether this call performed the fit.
  std::shared_ptr<const UtilityRow> lookup_or_fit(const Coalition& coalition,
                                                  const FitFn& fit,
                                                  bool* fitted = nullptr);

  std::shared_ptr<const UtilityRow> find(const Coalition& coalition) const;

  std::int64_t trainings() const;
  double utility_bound() const { return utility_bound_; }

 private:
  struct Slot {
    std::shared_ptr<const UtilityRow> row;  // null while in flight
  };

  double utility_bound_;
  mutable std::mutex mu_;
  std::condition_variable landed_;
  std::unordered_map<Coalition, Slot, CoalitionHash> entries_;
  std::int64_t trainings_ = 0;
};

}  // namespace locshap

#endif  // LOCSHAP_UTILITY_CACHE_H_
