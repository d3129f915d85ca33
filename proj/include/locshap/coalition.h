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

#ifndef LOCSHAP_COALITION_H_
#define LOCSHAP_COALITION_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace locshap {

// A set of training-point ids in canonical (strictly increasing) form. This is
// the unit of retraining: two coalitions compare equal, and hash equally, iff
// they hold the same members.
class Coalition {
 public:
  Coalition() = default;
  // Sorts and removes duplicates.
  explicit Coalition(std::vector<int> ids);
  Coalition(std::initializer_list<int> ids);

  // Adopts an already strictly increasing sequence without re-sorting.
  static Coalition from_sorted(std::vector<int> ids);

  std::span<const int> members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }
  bool contains(int id) const;
  // True when every member appears in `sorted_ids`.
  bool is_subset_of(std::span<const int> sorted_ids) const;

  Coalition with(int id) const;
  Coalition without(int id) const;
  Coalition intersect(std::span<const int> sorted_ids) const;

  std::size_t hash() const;

  friend bool operator==(const Coalition&, const Coalition&) = default;

 private:
  std::vector<int> members_;
};

struct CoalitionHash {
  std::size_t operator()(const Coalition& c) const { return c.hash(); }
};

// Size first, then lexicographic on members. This is the enumeration order of
// every subset walk in the library.
struct SizeLexLess {
  bool operator()(const Coalition& a, const Coalition& b) const;
};

// All subsets of `sorted_ids`, ordered by SizeLexLess.
std::vector<Coalition> all_subsets(std::span<const int> sorted_ids);

}  // namespace locshap

#endif  // LOCSHAP_COALITION_H_
