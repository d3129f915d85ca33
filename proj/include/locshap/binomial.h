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

#ifndef LOCSHAP_BINOMIAL_H_
#define LOCSHAP_BINOMIAL_H_

namespace locshap {

// C(n, k) as a double; 0 when k is outside [0, n]. Exact integer arithmetic
// for n <= 60, log-gamma beyond.
double binomial(int n, int k);

}  // namespace locshap

#endif  // LOCSHAP_BINOMIAL_H_
