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

#include "locshap/oracle.h"

#include "locshap/rng.h"
#include "locshap/types.h"

namespace locshap {

double UtilityOracle::value(const Coalition& coalition, int test) const {
  const int tests[] = {test};
  return evaluate(coalition, tests).utilities.front();
}

FunctionOracle::FunctionOracle(int num_players, int num_tests, Fn fn,
                               double bound)
    : num_players_(num_players),
      num_tests_(num_tests),
      fn_(std::move(fn)),
      bound_(bound) {
  if (num_players < 0 || num_tests < 0) {
    throw ValidationError("function oracle: negative size");
  }
}

Evaluation FunctionOracle::evaluate(const Coalition& coalition,
                                    std::span<const int> tests) const {
  Evaluation out;
  out.utilities.reserve(tests.size());
  for (int t : tests) out.utilities.push_back(fn_(coalition, t));
  return out;
}

FunctionOracle random_game(int num_players, int num_tests, std::uint64_t seed) {
  return FunctionOracle(
      num_players, num_tests,
      [seed](const Coalition& c, int t) {
        std::uint64_t h = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(t)));
        h = splitmix64(h ^ c.hash());
        h = splitmix64(h ^ static_cast<std::uint64_t>(c.size()));
        return static_cast<double>(h >> 11) * 0x1.0p-53;
      });
}

ProjectedOracle::ProjectedOracle(const UtilityOracle& inner,
                                 const SupportMap& supports)
    : inner_(inner), supports_(supports) {
  if (supports.num_tests() != inner.num_tests()) {
    throw ValidationError("projected oracle: support map covers " +
                          std::to_string(supports.num_tests()) +
                          " tests, game has " +
                          std::to_string(inner.num_tests()));
  }
}

Evaluation ProjectedOracle::evaluate(const Coalition& coalition,
                                     std::span<const int> tests) const {
  Evaluation out;
  out.utilities.reserve(tests.size());
  for (int t : tests) {
    const int one[] = {t};
    Evaluation e = inner_.evaluate(coalition.intersect(supports_.of(t)), one);
    out.utilities.push_back(e.utilities.front());
    if (!e.predictions.empty()) out.predictions.push_back(e.predictions.front());
  }
  if (out.predictions.size() != out.utilities.size()) out.predictions.clear();
  return out;
}

SumOracle::SumOracle(const UtilityOracle& a, const UtilityOracle& b)
    : a_(a), b_(b) {
  if (a.num_players() != b.num_players() || a.num_tests() != b.num_tests()) {
    throw ValidationError("sum oracle: games differ in shape");
  }
}

Evaluation SumOracle::evaluate(const Coalition& coalition,
                               std::span<const int> tests) const {
  Evaluation ea = a_.evaluate(coalition, tests);
  Evaluation eb = b_.evaluate(coalition, tests);
  for (std::size_t i = 0; i < ea.utilities.size(); ++i) {
    ea.utilities[i] += eb.utilities[i];
  }
  ea.predictions.clear();
  return ea;
}

}  // namespace locshap
