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

#include "locshap/coalition.h"

#include <algorithm>
#include <cassert>

namespace locshap {

Coalition::Coalition(std::vector<int> ids) : members_(std::move(ids)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

Coalition::Coalition(std::initializer_list<int> ids)
    : Coalition(std::vector<int>(ids)) {}

Coalition Coalition::from_sorted(std::vector<int> ids) {
  assert(std::adjacent_find(ids.begin(), ids.end(), std::greater_equal<>()) ==
         ids.end());
  Coalition c;
  c.members_ = std::move(ids);
  return c;
}

bool Coalition::contains(int id) const {
  return std::binary_search(members_.begin(), members_.end(), id);
}

bool Coalition::is_subset_of(std::span<const int> sorted_ids) const {
  return std::includes(sorted_ids.begin(), sorted_ids.end(), members_.begin(),
                       members_.end());
}

Coalition Coalition::with(int id) const {
  auto it = std::lower_bound(members_.begin(), members_.end(), id);
  if (it != members_.end() && *it == id) return *this;
  std::vector<int> ids;
  ids.reserve(members_.size() + 1);
  ids.insert(ids.end(), members_.begin(), it);
  ids.push_back(id);
  ids.insert(ids.end(), it, members_.end());
  return from_sorted(std::move(ids));
}

Coalition Coalition::without(int id) const {
  std::vector<int> ids;
  ids.reserve(members_.size());
  for (int m : members_) {
    if (m != id) ids.push_back(m);
  }
  return from_sorted(std::move(ids));
}

Coalition Coalition::intersect(std::span<const int> sorted_ids) const {
  std::vector<int> ids;
  std::set_intersection(members_.begin(), members_.end(), sorted_ids.begin(),
                        sorted_ids.end(), std::back_inserter(ids));
  return from_sorted(std::move(ids));
}

std::size_t Coalition::hash() const {
  // 64-bit FNV-1a over the member ids.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (int m : members_) {
    auto v = static_cast<std::uint32_t>(m);
    for (int b = 0; b < 4; ++b) {
      h ^= (v >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  return static_cast<std::size_t>(h);
}

bool SizeLexLess::operator()(const Coalition& a, const Coalition& b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.members().begin(), a.members().end(),
                                      b.members().begin(), b.members().end());
}

std::vector<Coalition> all_subsets(std::span<const int> sorted_ids) {
  const int n = static_cast<int>(sorted_ids.size());
  std::vector<Coalition> out;
  out.reserve(std::size_t{1} << n);
  // Walk sizes in order; within a size, index combinations lexicographically.
  std::vector<int> idx;
  for (int k = 0; k <= n; ++k) {
    idx.resize(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      std::vector<int> ids(k);
      for (int i = 0; i < k; ++i) ids[i] = sorted_ids[idx[i]];
      out.push_back(Coalition::from_sorted(std::move(ids)));
      int i = k - 1;
      while (i >= 0 && idx[i] == n - k + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

}  // namespace locshap
