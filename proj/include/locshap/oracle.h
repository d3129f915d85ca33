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

#ifndef LOCSHAP_ORACLE_H_
#define LOCSHAP_ORACLE_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "locshap/coalition.h"
#include "locshap/support.h"

namespace locshap {

// Result of training once on a coalition and scoring a list of test points.
// Both vectors are aligned with the requested tests; `predictions` is empty
// when the game has no notion of a predicted class.
struct Evaluation {
  std::vector<double> utilities;
  std::vector<int> predictions;
};

// The game v_t(S). One call to evaluate() is one model training.
// Implementations must be reentrant and deterministic.
class UtilityOracle {
 public:
  virtual ~UtilityOracle() = default;

  virtual int num_players() const = 0;
  virtual int num_tests() const = 0;
  virtual Evaluation evaluate(const Coalition& coalition,
                              std::span<const int> tests) const = 0;
  // Bound B on |v_t(S)|.
  virtual double utility_bound() const { return 1.0; }

  double value(const Coalition& coalition, int test) const;
};

// A game given by a plain function of (coalition, test id).
class FunctionOracle : public UtilityOracle {
 public:
  using Fn = std::function<double(const Coalition&, int)>;

  FunctionOracle(int num_players, int num_tests, Fn fn, double bound = 1.0);

  int num_players() const override { return num_players_; }
  int num_tests() const override { return num_tests_; }
  double utility_bound() const override { return bound_; }
  Evaluation evaluate(const Coalition& coalition,
                      std::span<const int> tests) const override;

 private:
  int num_players_;
  int num_tests_;
  Fn fn_;
  double bound_;
};

// A game with an independent pseudo-random utility in [0, 1) for every
// (coalition, test) pair, derived by hashing; no storage needed.
FunctionOracle random_game(int num_players, int num_tests, std::uint64_t seed);

// v^N_t(S) = v_t(S ∩ N(t)).
class ProjectedOracle : public UtilityOracle {
 public:
  ProjectedOracle(const UtilityOracle& inner, const SupportMap& supports);

  int num_players() const override { return inner_.num_players(); }
  int num_tests() const override { return inner_.num_tests(); }
  double utility_bound() const override { return inner_.utility_bound(); }
  Evaluation evaluate(const Coalition& coalition,
                      std::span<const int> tests) const override;

 private:
  const UtilityOracle& inner_;
  const SupportMap& supports_;
};

// Sum of two games over the same players and tests.
class SumOracle : public UtilityOracle {
 public:
  SumOracle(const UtilityOracle& a, const UtilityOracle& b);

  int num_players() const override { return a_.num_players(); }
  int num_tests() const override { return a_.num_tests(); }
  double utility_bound() const override {
    return a_.utility_bound() + b_.utility_bound();
  }
  Evaluation evaluate(const Coalition& coalition,
                      std::span<const int> tests) const override;

 private:
  const UtilityOracle& a_;
  const UtilityOracle& b_;
};

}  // namespace locshap

#endif  // LOCSHAP_ORACLE_H_
