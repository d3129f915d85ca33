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

#ifndef LOCSHAP_SAMPLING_H_
#define LOCSHAP_SAMPLING_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "locshap/coalition.h"
#include "locshap/oracle.h"
#include "locshap/result.h"
#include "locshap/rng.h"
#include "locshap/support.h"
#include "locshap/utility_cache.h"

namespace locshap {

struct SamplerConfig {
  // Sample cap: rounds per test point for local methods, permutations (or
  // paired rounds) for global ones.
  std::int64_t max_samples = 1000;
  double tau = 0.05;
  int check_every = 100;
  double eps_guard = 1e-12;
  std::uint64_t seed = 0;
  // Truncated Monte Carlo: stop a scan once the running utility is within
  // this distance of the full-data utility...
  double tmc_perf_tol = 0.01;
  // ...or the predicted classes stayed unchanged for this many additions.
  int tmc_stable_runs = 5;
  // When false, always run max_samples; checkpoints are still traced.
  bool stop_on_convergence = true;
  // Keep every fitted coalition in SamplingTrace::fits.
  bool record_fits = false;
  int workers = 1;

  // Throws ValidationError on tau <= 0, max_samples <= 0 or check_every < 1.
  void validate() const;
};

struct FitRecord {
  int sampling_test = -1;  // -1 for global methods
  Coalition coalition;
};

struct SamplingTrace {
  struct PerTest {
    std::int64_t hits = 0;
    std::int64_t misses = 0;
    // Distinct coalitions drawn, and the subset of those that were fitted.
    std::int64_t distinct_sampled = 0;
    std::int64_t distinct_accepted = 0;
  };
  std::vector<PerTest> per_test;  // lsmr_a only
  std::int64_t trainings = 0;
  std::int64_t samples = 0;
  std::vector<FitRecord> fits;
};

struct SamplingRun {
  ValuationResult result;
  SamplingTrace trace;
};

// (1/n) sum_i |curr_i - prev_i| / (|curr_i| + eps).
double convergence_criterion(std::span<const double> previous,
                             std::span<const double> current,
                             double eps_guard = 1e-12);

// Relative-change stopping rule evaluated every `check_every` samples
// against the previous checkpoint.
class ConvergenceMonitor {
 public:
  ConvergenceMonitor(double tau, int check_every, double eps_guard = 1e-12);
  explicit ConvergenceMonitor(const SamplerConfig& config)
      : ConvergenceMonitor(config.tau, config.check_every, config.eps_guard) {}

  bool due(std::int64_t samples) const {
    return samples > 0 && samples % check_every_ == 0;
  }
  // Records a checkpoint. Returns true when a previous checkpoint exists and
  // the criterion against it is below tau.
  bool observe(std::int64_t samples, std::span<const double> estimate);

  bool converged() const { return converged_; }
  std::optional<double> last_criterion() const { return last_criterion_; }
  const std::vector<Checkpoint>& trace() const { return trace_; }

 private:
  double tau_;
  int check_every_;
  double eps_guard_;
  std::vector<double> previous_;
  bool has_previous_ = false;
  bool converged_ = false;
  std::optional<double> last_criterion_;
  std::vector<Checkpoint> trace_;
};

// Permutation sampling over all of D, marginals summed over tests.
SamplingRun global_mc(const UtilityOracle& oracle, const SamplerConfig& config);

// Permutation sampling over N(t), independently per test.
SamplingRun local_mc(const UtilityOracle& oracle, const SupportMap& supports,
                     const SamplerConfig& config);

// global_mc with per-permutation truncation; one extra fit for v(D).
SamplingRun tmc(const UtilityOracle& oracle, const SamplerConfig& config);

// Complementary contributions: per round a random split (S, D\S), two fits,
// credited into size strata.
SamplingRun comple_s(const UtilityOracle& oracle, const SamplerConfig& config);

// Reuse-aware local sampling. Each round draws the predecessors of t in a
// random ordering of N(t) + {t}; the draw is fitted only when t is its
// pivot, and the fit updates every test whose support contains it.
SamplingRun lsmr_a(const UtilityOracle& oracle, const SupportMap& supports,
                   UtilityCache& cache, const SamplerConfig& config);
SamplingRun lsmr_a(const UtilityOracle& oracle, const SupportMap& supports,
                   UtilityCache& cache, const TestOrder& order,
                   const SamplerConfig& config);

// Draws the predecessors of the sentinel in a uniform ordering of
// `players` + {sentinel}.
Coalition draw_prefix(std::span<const int> players, Rng& rng);

struct VarianceStudy {
  std::vector<double> mean;
  std::vector<double> variance;  // unbiased, per point
};

// Runs `estimator` once per seed and summarizes each coordinate.
VarianceStudy variance_study(
    const std::function<std::vector<double>(std::uint64_t)>& estimator,
    std::span<const std::uint64_t> seeds);

}  // namespace locshap

#endif  // LOCSHAP_SAMPLING_H_
