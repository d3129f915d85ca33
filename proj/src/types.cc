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

#include "locshap/types.h"

#include <cmath>
#include <string>

namespace locshap {

void Dataset::validate() const {
  if (num_classes < 1) {
    throw ValidationError("dataset: num_classes must be positive");
  }
  const int d = dim();
  for (int i = 0; i < size(); ++i) {
    const TrainingPoint& p = points[i];
    if (p.id != i) {
      throw ValidationError("dataset: training id " + std::to_string(p.id) +
                            " at position " + std::to_string(i) +
                            " (ids must be 0..|D|-1 in order)");
    }
    if (static_cast<int>(p.features.size()) != d) {
      throw ValidationError("dataset: training point " + std::to_string(i) +
                            " has dimension " +
                            std::to_string(p.features.size()) + ", expected " +
                            std::to_string(d));
    }
    if (p.label < 0 || p.label >= num_classes) {
      throw ValidationError("dataset: training point " + std::to_string(i) +
                            " has label " + std::to_string(p.label) +
                            " outside 0.." + std::to_string(num_classes - 1));
    }
  }
}

void validate_tests(const Dataset& data, std::span<const TestPoint> tests) {
  for (std::size_t i = 0; i < tests.size(); ++i) {
    const TestPoint& t = tests[i];
    if (t.id != static_cast<int>(i)) {
      throw ValidationError("tests: test id " + std::to_string(t.id) +
                            " at position " + std::to_string(i));
    }
    if (data.size() > 0 && static_cast<int>(t.features.size()) != data.dim()) {
      throw ValidationError("tests: test point " + std::to_string(i) +
                            " has dimension " +
                            std::to_string(t.features.size()) + ", expected " +
                            std::to_string(data.dim()));
    }
    if (t.label < 0 || t.label >= data.num_classes) {
      throw ValidationError("tests: test point " + std::to_string(i) +
                            " has unknown label " + std::to_string(t.label));
    }
  }
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

}  // namespace locshap
