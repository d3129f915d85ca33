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

#include "locshap/utility_cache.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "locshap/types.h"

namespace locshap {

double UtilityRow::at(int test) const {
  auto it = std::lower_bound(tests.begin(), tests.end(), test);
  if (it == tests.end() || *it != test) {
    throw std::out_of_range("utility row: test " + std::to_string(test) +
                            " was not scored");
  }
  return values[it - tests.begin()];
}

UtilityCache::UtilityCache(double utility_bound) : utility_bound_(utility_bound) {
  if (!(utility_bound > 0.0)) {
    throw ValidationError("utility cache: bound must be positive");
  }
}

std::shared_ptr<const UtilityRow> UtilityCache::lookup_or_fit(
    const Coalition& coalition, const FitFn& fit, bool* fitted) {
  if (fitted) *fitted = false;
  {
    std::unique_lock lock(mu_);
    while (true) {
      auto it = entries_.find(coalition);
      if (it == entries_.end()) {
        entries_.emplace(coalition, Slot{});
        break;
      }
      if (it->second.row) return it->second.row;
      landed_.wait(lock);
    }
  }
  // This caller owns the in-flight slot.
  std::shared_ptr<const UtilityRow> row;
  try {
    auto fresh = std::make_shared<UtilityRow>(fit());
    if (fresh->tests.size() != fresh->values.size()) {
      throw ValidationError("utility cache: row has mismatched lengths");
    }
    for (double u : fresh->values) {
      if (!(std::abs(u) <= utility_bound_)) {
        throw ValidationError("utility cache: utility " + std::to_string(u) +
                              " exceeds bound " +
                              std::to_string(utility_bound_));
      }
    }
    row = std::move(fresh);
  } catch (...) {
    {
      std::lock_guard lock(mu_);
      entries_.erase(coalition);
    }
    landed_.notify_all();
    throw;
  }
  {
    std::lock_guard lock(mu_);
    entries_[coalition].row = row;
    ++trainings_;
  }
  landed_.notify_all();
  if (fitted) *fitted = true;
  return row;
}

std::shared_ptr<const UtilityRow> UtilityCache::find(
    const Coalition& coalition) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(coalition);
  return it == entries_.end() ? nullptr : it->second.row;
}

std::int64_t UtilityCache::trainings() const {
  std::lock_guard lock(mu_);
  return trainings_;
}

}  // namespace locshap
