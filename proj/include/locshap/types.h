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

#ifndef LOCSHAP_TYPES_H_
#define LOCSHAP_TYPES_H_

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace locshap {

// Base of all errors raised by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad ids, inconsistent dimensions, unknown labels, bad
// configuration values.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A problem exceeds an enumeration limit (exact methods only).
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

struct TrainingPoint {
  int id = 0;
  std::vector<double> features;
  int label = 0;
};

struct TestPoint {
  int id = 0;
  std::vector<double> features;
  int label = 0;
};

struct Dataset {
  std::vector<TrainingPoint> points;
  int num_classes = 1;

  int size() const { return static_cast<int>(points.size()); }
  int dim() const {
    return points.empty() ? 0 : static_cast<int>(points.front().features.size());
  }

  // Checks ids are 0..size-1 in order, dimensions agree and labels are in
  // range. Throws ValidationError.
  void validate() const;
};

using TestSet = std::vector<TestPoint>;

// Checks test ids are 0..|T|-1 in order and that features and labels are
// compatible with `data`.
void validate_tests(const Dataset& data, std::span<const TestPoint> tests);

double squared_distance(std::span<const double> a, std::span<const double> b);
double euclidean_distance(std::span<const double> a, std::span<const double> b);

}  // namespace locshap

#endif  // LOCSHAP_TYPES_H_
