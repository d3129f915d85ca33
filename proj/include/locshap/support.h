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

#ifndef LOCSHAP_SUPPORT_H_
#define LOCSHAP_SUPPORT_H_

#include <optional>
#include <span>
#include <vector>

#include "locshap/coalition.h"

namespace locshap {

// Support sets N(t): for every test id, the training ids that can influence
// the prediction at that test point. Stored sorted and deduplicated.
class SupportMap {
 public:
  SupportMap() = default;
  // Throws ValidationError when a training id is outside [0, num_training).
  SupportMap(int num_training, std::vector<std::vector<int>> supports);

  int num_training() const { return num_training_; }
  int num_tests() const { return static_cast<int>(supports_.size()); }
  std::span<const int> of(int test) const { return supports_.at(test); }
  bool contains(int test, int training) const;
  int max_support_size() const;

  friend bool operator==(const SupportMap&, const SupportMap&) = default;

 private:
  int num_training_ = 0;
  std::vector<std::vector<int>> supports_;
};

// R(z): the test ids whose supports contain training id z, sorted.
class ReverseIndex {
 public:
  ReverseIndex() = default;
  ReverseIndex(int num_tests, std::vector<std::vector<int>> reverse)
      : num_tests_(num_tests), reverse_(std::move(reverse)) {}

  int num_tests() const { return num_tests_; }
  int num_training() const { return static_cast<int>(reverse_.size()); }
  std::span<const int> of(int training) const { return reverse_.at(training); }

  // Relational inverse back to support sets.
  SupportMap invert() const;

 private:
  int num_tests_ = 0;
  std::vector<std::vector<int>> reverse_;
};

ReverseIndex build_reverse_index(const SupportMap& supports, int num_training);

// Fixed total order over test ids used for pivot selection.
class TestOrder {
 public:
  // Identity order: ascending test id.
  static TestOrder ascending(int num_tests);
  // `sequence` lists every test id exactly once, first to last.
  explicit TestOrder(std::vector<int> sequence);

  int rank(int test) const { return rank_.at(test); }
  std::span<const int> sequence() const { return sequence_; }
  int size() const { return static_cast<int>(sequence_.size()); }

 private:
  std::vector<int> sequence_;
  std::vector<int> rank_;
};

// R_S = intersection of R(z) over z in S; every test when S is empty.
std::vector<int> eligible_tests(const Coalition& coalition,
                                const ReverseIndex& reverse);

// The first eligible test under `order`, or nothing when R_S is empty.
std::optional<int> pivot(const Coalition& coalition, const ReverseIndex& reverse,
                         const TestOrder& order);
std::optional<int> pivot_of(std::span<const int> eligible, const TestOrder& order);

}  // namespace locshap

#endif  // LOCSHAP_SUPPORT_H_
