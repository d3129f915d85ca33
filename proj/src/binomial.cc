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

#include "locshap/binomial.h"

#include <cmath>

namespace locshap {

double binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  if (n <= 60) {
    // C(n, i) * (n - i) / (i + 1) stays integral and below 2^127 for n <= 60.
    unsigned __int128 c = 1;
    for (int i = 0; i < k; ++i) {
      c = c * static_cast<unsigned>(n - i) / static_cast<unsigned>(i + 1);
    }
    return static_cast<double>(c);
  }
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                  std::lgamma(n - k + 1.0));
}

}  // namespace locshap
