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

#include "locshap/support.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "locshap/types.h"

namespace locshap {

SupportMap::SupportMap(int num_training, std::vector<std::vector<int>> supports)
    : num_training_(num_training), supports_(std::move(supports)) {
  if (num_training < 0) throw ValidationError("support map: negative |D|");
  for (std::size_t t = 0; t < supports_.size(); ++t) {
    auto& s = supports_[t];
    for (int z : s) {
      if (z < 0 || z >= num_training) {
        throw ValidationError("support map: test " + std::to_string(t) +
                              " references training id " + std::to_string(z) +
                              " outside 0.." + std::to_string(num_training - 1));
      }
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
}

bool SupportMap::contains(int test, int training) const {
  auto s = of(test);
  return std::binary_search(s.begin(), s.end(), training);
}

int SupportMap::max_support_size() const {
  std::size_t best = 0;
  for (const auto& s : supports_) best = std::max(best, s.size());
  return static_cast<int>(best);
}

SupportMap ReverseIndex::invert() const {
  std::vector<std::vector<int>> supports(num_tests_);
  for (int z = 0; z < num_training(); ++z) {
    for (int t : reverse_[z]) supports[t].push_back(z);
  }
  return SupportMap(num_training(), std::move(supports));
}

ReverseIndex build_reverse_index(const SupportMap& supports, int num_training) {
  if (num_training < supports.num_training()) {
    throw ValidationError("reverse index: |D| smaller than the support map's");
  }
  std::vector<std::vector<int>> reverse(num_training);
  for (int t = 0; t < supports.num_tests(); ++t) {
    for (int z : supports.of(t)) reverse[z].push_back(t);
  }
  return ReverseIndex(supports.num_tests(), std::move(reverse));
}

TestOrder TestOrder::ascending(int num_tests) {
  std::vector<int> seq(num_tests);
  std::iota(seq.begin(), seq.end(), 0);
  return TestOrder(std::move(seq));
}

TestOrder::TestOrder(std::vector<int> sequence)
    : sequence_(std::move(sequence)), rank_(sequence_.size(), -1) {
  const int n = static_cast<int>(sequence_.size());
  for (int i = 0; i < n; ++i) {
    const int t = sequence_[i];
    if (t < 0 || t >= n || rank_[t] != -1) {
      throw ValidationError("test order: not a permutation of 0.." +
                            std::to_string(n - 1));
    }
    rank_[t] = i;
  }
}

std::vector<int> eligible_tests(const Coalition& coalition,
                                const ReverseIndex& reverse) {
  auto members = coalition.members();
  if (members.empty()) {
    std::vector<int> all(reverse.num_tests());
    std::iota(all.begin(), all.end(), 0);
    return all;
  }
  // Start from the rarest member to keep the running intersection small.
  auto rarest = std::min_element(
      members.begin(), members.end(), [&](int a, int b) {
        return reverse.of(a).size() < reverse.of(b).size();
      });
  auto first = reverse.of(*rarest);
  std::vector<int> acc(first.begin(), first.end());
  std::vector<int> next;
  for (int z : members) {
    if (acc.empty()) break;
    if (z == *rarest) continue;
    auto r = reverse.of(z);
    next.clear();
    std::set_intersection(acc.begin(), acc.end(), r.begin(), r.end(),
                          std::back_inserter(next));
    acc.swap(next);
  }
  return acc;
}

std::optional<int> pivot_of(std::span<const int> eligible,
                            const TestOrder& order) {
  if (eligible.empty()) return std::nullopt;
  int best = eligible.front();
  for (int t : eligible) {
    if (order.rank(t) < order.rank(best)) best = t;
  }
  return best;
}

std::optional<int> pivot(const Coalition& coalition, const ReverseIndex& reverse,
                         const TestOrder& order) {
  return pivot_of(eligible_tests(coalition, reverse), order);
}

}  // namespace locshap
