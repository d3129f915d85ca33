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

#ifndef LOCSHAP_RNG_H_
#define LOCSHAP_RNG_H_

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace locshap {

std::uint64_t splitmix64(std::uint64_t x);

// mt19937_64 with distribution code that does not depend on the standard
// library implementation, so streams are reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent substream: seed xor hash(stream).
  static Rng for_stream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(seed ^ splitmix64(stream));
  }

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, n); n > 0.
  std::uint64_t uniform_index(std::uint64_t n);
  // Uniform on [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // Standard normal (Box-Muller).
  double normal();

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace locshap

#endif  // LOCSHAP_RNG_H_
