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

#ifndef LOCSHAP_RESULT_H_
#define LOCSHAP_RESULT_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace locshap {

struct Checkpoint {
  std::int64_t samples = 0;
  double criterion = 0.0;
};

// Per-training-point values plus the run's accounting.
struct ValuationResult {
  std::string method;
  // One entry per training id; zero for points outside every support.
  std::vector<double> values;
  // Monte Carlo rounds (per test point for local methods, total permutations
  // for global ones); zero for exact methods.
  std::int64_t samples_used = 0;
  // Distinct model fits performed.
  std::int64_t trainings = 0;
  // Utility values consumed, v_t(S) for one (S, t) each.
  std::int64_t evaluations = 0;
  std::uint64_t seed = 0;
  double elapsed_seconds = 0.0;
  bool converged = false;
  std::vector<Checkpoint> trace;
  // Optional per-test decomposition phi_z(v_t): per_test[t] lists (z, value).
  std::vector<std::vector<std::pair<int, double>>> per_test;
};

}  // namespace locshap

#endif  // LOCSHAP_RESULT_H_
