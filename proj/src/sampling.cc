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

#include "locshap/sampling.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include "locshap/parallel.h"
#include "locshap/types.h"

namespace locshap {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<int> iota_vector(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

std::vector<double> scaled(const std::vector<double>& sums, std::int64_t m) {
  std::vector<double> out(sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i) out[i] = sums[i] / m;
  return out;
}

double total(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s;
}

// Shared bookkeeping of the sample loop: checkpoints and early stop.
struct Loop {
  const SamplerConfig& config;
  ConvergenceMonitor monitor;

  // The all-zero starting estimate is checkpoint 0.
  Loop(const SamplerConfig& c, int dim) : config(c), monitor(c) {
    monitor.observe(0, std::vector<double>(dim, 0.0));
  }

  // Returns true when sampling should stop after `m` samples.
  bool step(std::int64_t m, const std::vector<double>& estimate) {
    if (!monitor.due(m)) return false;
    return monitor.observe(m, estimate) && config.stop_on_convergence;
  }

  void finish(ValuationResult& r, std::int64_t m) {
    r.samples_used = m;
    r.converged = monitor.converged();
    r.trace = monitor.trace();
    r.seed = config.seed;
  }
};

}  // namespace

void SamplerConfig::validate() const {
  if (!(tau > 0.0)) throw ValidationError("sampler: tau must be positive");
  if (max_samples <= 0) throw ValidationError("sampler: M must be positive");
  if (check_every < 1) throw ValidationError("sampler: check_every must be >= 1");
  if (!(eps_guard > 0.0)) throw ValidationError("sampler: eps_guard must be positive");
  if (tmc_perf_tol < 0.0) throw ValidationError("sampler: tmc_perf_tol must be >= 0");
}

double convergence_criterion(std::span<const double> previous,
                             std::span<const double> current,
                             double eps_guard) {
  if (previous.size() != current.size()) {
    throw ValidationError("convergence: checkpoint sizes differ");
  }
  if (current.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < current.size(); ++i) {
    sum += std::abs(current[i] - previous[i]) / (std::abs(current[i]) + eps_guard);
  }
  return sum / static_cast<double>(current.size());
}

ConvergenceMonitor::ConvergenceMonitor(double tau, int check_every,
                                       double eps_guard)
    : tau_(tau), check_every_(check_every), eps_guard_(eps_guard) {
  if (!(tau > 0.0) || check_every < 1) {
    throw ValidationError("convergence monitor: tau > 0 and cadence >= 1 required");
  }
}

bool ConvergenceMonitor::observe(std::int64_t samples,
                                 std::span<const double> estimate) {
  bool fired = false;
  if (has_previous_) {
    const double c = convergence_criterion(previous_, estimate, eps_guard_);
    last_criterion_ = c;
    trace_.push_back({samples, c});
    fired = c < tau_;
  }
  converged_ = fired;
  previous_.assign(estimate.begin(), estimate.end());
  has_previous_ = true;
  return fired;
}

Coalition draw_prefix(std::span<const int> players, Rng& rng) {
  // -1 marks the sampling test point itself.
  std::vector<int> order(players.begin(), players.end());
  order.push_back(-1);
  rng.shuffle(std::span<int>(order));
  std::vector<int> prefix(order.begin(), std::find(order.begin(), order.end(), -1));
  return Coalition(std::move(prefix));
}

namespace {

// Permutation scan shared by global_mc and tmc. `stop_before(i, state)` is
// consulted before player i of the permutation is added.
template <typename StopFn>
std::int64_t scan_permutation(const UtilityOracle& oracle,
                              std::span<const int> all_tests,
                              std::span<const int> permutation,
                              std::vector<double>& sums, SamplingTrace& trace,
                              bool record, StopFn&& stop_before) {
  std::vector<int> members;
  Evaluation prev = oracle.evaluate(Coalition(), all_tests);
  std::int64_t fits = 1;
  if (record) trace.fits.push_back({-1, Coalition()});
  for (std::size_t i = 0; i < permutation.size(); ++i) {
    if (stop_before(i, prev)) break;
    members.push_back(permutation[i]);
    Coalition c(members);
    Evaluation next = oracle.evaluate(c, all_tests);
    ++fits;
    if (record) trace.fits.push_back({-1, c});
    sums[permutation[i]] += total(next.utilities) - total(prev.utilities);
    prev = std::move(next);
  }
  return fits;
}

}  // namespace

SamplingRun global_mc(const UtilityOracle& oracle, const SamplerConfig& config) {
  config.validate();
  const auto start = Clock::now();
  SamplingRun run;
  run.result.method = "global-mc";
  const int d = oracle.num_players();
  const std::vector<int> tests = iota_vector(oracle.num_tests());
  std::vector<double> sums(d, 0.0);
  std::vector<int> perm = iota_vector(d);
  Rng rng(config.seed);
  Loop loop(config, oracle.num_players());
  std::int64_t m = 0;
  while (m < config.max_samples) {
    rng.shuffle(std::span<int>(perm));
    run.trace.trainings += scan_permutation(
        oracle, tests, perm, sums, run.trace, config.record_fits,
        [](std::size_t, const Evaluation&) { return false; });
    ++m;
    if (loop.step(m, scaled(sums, m))) break;
  }
  run.result.values = scaled(sums, m);
  loop.finish(run.result, m);
  run.result.trainings = run.trace.trainings;
  run.result.evaluations = run.trace.trainings * oracle.num_tests();
  run.trace.samples = m;
  run.result.elapsed_seconds = seconds_since(start);
  return run;
}

SamplingRun tmc(const UtilityOracle& oracle, const SamplerConfig& config) {
  config.validate();
  const auto start = Clock::now();
  SamplingRun run;
  run.result.method = "tmc";
  const int d = oracle.num_players();
  const int num_tests = oracle.num_tests();
  const std::vector<int> tests = iota_vector(num_tests);
  std::vector<int> all = iota_vector(d);
  const double full_score =
      num_tests ? total(oracle.evaluate(Coalition::from_sorted(all), tests).utilities) /
                      num_tests
                : 0.0;
  run.trace.trainings = 1;
  if (config.record_fits) run.trace.fits.push_back({-1, Coalition::from_sorted(all)});

  std::vector<double> sums(d, 0.0);
  std::vector<int> perm = all;
  Rng rng(config.seed);
  Loop loop(config, oracle.num_players());
  std::int64_t m = 0;
  while (m < config.max_samples) {
    rng.shuffle(std::span<int>(perm));
    std::vector<int> last_predictions;
    int stable = 0;
    run.trace.trainings += scan_permutation(
        oracle, tests, perm, sums, run.trace, config.record_fits,
        [&](std::size_t, const Evaluation& current) {
          const double score = num_tests ? total(current.utilities) / num_tests : 0.0;
          if (std::abs(full_score - score) < config.tmc_perf_tol) return true;
          if (!current.predictions.empty()) {
            if (current.predictions == last_predictions) {
              ++stable;
            } else {
              stable = 0;
              last_predictions = current.predictions;
            }
          }
          return stable >= config.tmc_stable_runs;
        });
    ++m;
    if (loop.step(m, scaled(sums, m))) break;
  }
  run.result.values = scaled(sums, m);
  loop.finish(run.result, m);
  run.result.trainings = run.trace.trainings;
  run.result.evaluations = run.trace.trainings * num_tests;
  run.trace.samples = m;
  run.result.elapsed_seconds = seconds_since(start);
  return run;
}

SamplingRun local_mc(const UtilityOracle& oracle, const SupportMap& supports,
                     const SamplerConfig& config) {
  config.validate();
  if (supports.num_tests() != oracle.num_tests()) {
    throw ValidationError("support map shape does not match the game");
  }
  const auto start = Clock::now();
  SamplingRun run;
  run.result.method = "local-mc";
  const int num_tests = oracle.num_tests();
  std::vector<Rng> rngs;
  std::vector<std::vector<int>> perms(num_tests);
  for (int t = 0; t < num_tests; ++t) {
    rngs.push_back(Rng::for_stream(config.seed, static_cast<std::uint64_t>(t)));
    auto s = supports.of(t);
    perms[t].assign(s.begin(), s.end());
  }
  std::vector<double> sums(oracle.num_players(), 0.0);
  std::vector<std::vector<double>> round_marginals(num_tests);
  std::vector<std::vector<Coalition>> round_fits(num_tests);
  Loop loop(config, oracle.num_players());
  std::int64_t m = 0;
  while (m < config.max_samples) {
    parallel_for(num_tests, config.workers, [&](std::size_t ti) {
      const int t = static_cast<int>(ti);
      auto& perm = perms[t];
      auto& marginal = round_marginals[t];
      marginal.assign(perm.size(), 0.0);
      round_fits[t].clear();
      if (perm.empty()) return;
      rngs[t].shuffle(std::span<int>(perm));
      const int one[] = {t};
      std::vector<int> members;
      double prev = oracle.evaluate(Coalition(), one).utilities.front();
      if (config.record_fits) round_fits[t].push_back(Coalition());
      for (std::size_t i = 0; i < perm.size(); ++i) {
        members.push_back(perm[i]);
        Coalition c(members);
        const double next = oracle.evaluate(c, one).utilities.front();
        if (config.record_fits) round_fits[t].push_back(std::move(c));
        marginal[i] = next - prev;
        prev = next;
      }
    });
    for (int t = 0; t < num_tests; ++t) {
      for (std::size_t i = 0; i < perms[t].size(); ++i) {
        sums[perms[t][i]] += round_marginals[t][i];
      }
      if (!perms[t].empty()) {
        run.trace.trainings += static_cast<std::int64_t>(perms[t].size()) + 1;
      }
      for (auto& c : round_fits[t]) run.trace.fits.push_back({t, std::move(c)});
    }
    ++m;
    if (loop.step(m, scaled(sums, m))) break;
  }
  run.result.values = scaled(sums, m);
  loop.finish(run.result, m);
  run.result.trainings = run.trace.trainings;
  run.result.evaluations = run.trace.trainings;
  run.trace.samples = m * num_tests;
  run.result.elapsed_seconds = seconds_since(start);
  return run;
}

SamplingRun comple_s(const UtilityOracle& oracle, const SamplerConfig& config) {
  config.validate();
  const auto start = Clock::now();
  SamplingRun run;
  run.result.method = "comple-s";
  const int d = oracle.num_players();
  const std::vector<int> tests = iota_vector(oracle.num_tests());
  // strata[i * (d + 1) + k]: complementary contributions of i from
  // coalitions of size k that contain i.
  std::vector<double> strata_sum(static_cast<std::size_t>(d) * (d + 1), 0.0);
  std::vector<std::int64_t> strata_count(strata_sum.size(), 0);
  auto estimate = [&] {
    std::vector<double> phi(d, 0.0);
    for (int i = 0; i < d; ++i) {
      double acc = 0.0;
      for (int k = 1; k <= d; ++k) {
        const std::size_t cell = static_cast<std::size_t>(i) * (d + 1) + k;
        if (strata_count[cell]) acc += strata_sum[cell] / strata_count[cell];
      }
      phi[i] = acc / d;
    }
    return phi;
  };

  std::vector<int> perm = iota_vector(d);
  Rng rng(config.seed);
  Loop loop(config, oracle.num_players());
  std::int64_t m = 0;
  while (m < config.max_samples && d > 0) {
    rng.shuffle(std::span<int>(perm));
    const int split = static_cast<int>(rng.uniform_index(d)) + 1;
    Coalition inside(std::vector<int>(perm.begin(), perm.begin() + split));
    Coalition outside(std::vector<int>(perm.begin() + split, perm.end()));
    const double u = total(oracle.evaluate(inside, tests).utilities) -
                     total(oracle.evaluate(outside, tests).utilities);
    run.trace.trainings += 2;
    if (config.record_fits) {
      run.trace.fits.push_back({-1, inside});
      run.trace.fits.push_back({-1, outside});
    }
    for (int i : inside.members()) {
      const std::size_t cell = static_cast<std::size_t>(i) * (d + 1) + split;
      strata_sum[cell] += u;
      ++strata_count[cell];
    }
    for (int i : outside.members()) {
      const std::size_t cell = static_cast<std::size_t>(i) * (d + 1) + (d - split);
      strata_sum[cell] -= u;
      ++strata_count[cell];
    }
    ++m;
    if (loop.monitor.due(m) && loop.step(m, estimate())) break;
  }
  run.result.values = estimate();
  loop.finish(run.result, m);
  run.result.trainings = run.trace.trainings;
  run.result.evaluations = run.trace.trainings * oracle.num_tests();
  run.trace.samples = m;
  run.result.elapsed_seconds = seconds_since(start);
  return run;
}

SamplingRun lsmr_a(const UtilityOracle& oracle, const SupportMap& supports,
                   UtilityCache& cache, const SamplerConfig& config) {
  return lsmr_a(oracle, supports, cache, TestOrder::ascending(oracle.num_tests()),
                config);
}

SamplingRun lsmr_a(const UtilityOracle& oracle, const SupportMap& supports,
                   UtilityCache& cache, const TestOrder& order,
                   const SamplerConfig& config) {
  config.validate();
  const int num_tests = oracle.num_tests();
  if (supports.num_tests() != num_tests ||
      supports.num_training() != oracle.num_players()) {
    throw ValidationError("support map shape does not match the game");
  }
  if (order.size() != num_tests) {
    throw ValidationError("test order does not cover every test");
  }
  const auto start = Clock::now();
  SamplingRun run;
  run.result.method = "lsmr-a";
  run.trace.per_test.resize(num_tests);
  const ReverseIndex reverse = build_reverse_index(supports, oracle.num_players());
  const std::int64_t trainings_before = cache.trainings();

  std::vector<Rng> rngs;
  for (int t = 0; t < num_tests; ++t) {
    rngs.push_back(Rng::for_stream(config.seed, static_cast<std::uint64_t>(t)));
  }
  std::vector<std::unordered_set<Coalition, CoalitionHash>> sampled(num_tests);
  std::vector<std::unordered_set<Coalition, CoalitionHash>> accepted(num_tests);
  std::vector<double> sums(oracle.num_players(), 0.0);

  struct Hit {
    int test;
    Coalition subset;
    std::vector<int> audience;
    std::shared_ptr<const UtilityRow> row;
    bool fitted = false;
  };
  std::vector<Hit> hits;
  Loop loop(config, oracle.num_players());
  std::int64_t m = 0;
  while (m < config.max_samples) {
    // Draw one subset per test; keep the pivot-accepted ones.
    hits.clear();
    for (int t : order.sequence()) {
      Coalition s = draw_prefix(supports.of(t), rngs[t]);
      auto& stats = run.trace.per_test[t];
      if (sampled[t].insert(s).second) ++stats.distinct_sampled;
      std::vector<int> audience = eligible_tests(s, reverse);
      if (pivot_of(audience, order) != t) {
        ++stats.misses;
        continue;
      }
      ++stats.hits;
      if (accepted[t].insert(s).second) ++stats.distinct_accepted;
      hits.push_back({t, std::move(s), std::move(audience), nullptr, false});
    }
    parallel_for(hits.size(), config.workers, [&](std::size_t i) {
      Hit& h = hits[i];
      h.row = cache.lookup_or_fit(
          h.subset,
          [&] {
            Evaluation e = oracle.evaluate(h.subset, h.audience);
            return UtilityRow{h.audience, std::move(e.utilities)};
          },
          &h.fitted);
    });
    for (Hit& h : hits) {
      if (h.fitted && config.record_fits) run.trace.fits.push_back({h.test, h.subset});
      const int size = h.subset.size();
      for (int t : h.audience) {
        const double v = h.row->at(t);
        auto players = supports.of(t);
        const double n = static_cast<double>(players.size());
        for (int z : players) {
          if (h.subset.contains(z)) {
            sums[z] += (n + 1.0) * v / size;
          } else {
            sums[z] -= (n + 1.0) * v / (n - size);
          }
        }
        ++run.result.evaluations;
      }
    }
    ++m;
    if (loop.step(m, scaled(sums, m))) break;
  }
  run.result.values = scaled(sums, m);
  loop.finish(run.result, m);
  run.trace.trainings = cache.trainings() - trainings_before;
  run.result.trainings = run.trace.trainings;
  run.trace.samples = m * num_tests;
  run.result.elapsed_seconds = seconds_since(start);
  return run;
}

VarianceStudy variance_study(
    const std::function<std::vector<double>(std::uint64_t)>& estimator,
    std::span<const std::uint64_t> seeds) {
  if (seeds.size() < 2) throw ValidationError("variance study: need at least two seeds");
  std::vector<std::vector<double>> runs;
  for (std::uint64_t s : seeds) runs.push_back(estimator(s));
  const std::size_t dim = runs.front().size();
  VarianceStudy out;
  out.mean.assign(dim, 0.0);
  out.variance.assign(dim, 0.0);
  for (const auto& r : runs) {
    if (r.size() != dim) throw ValidationError("variance study: runs differ in length");
    for (std::size_t i = 0; i < dim; ++i) out.mean[i] += r[i];
  }
  for (double& x : out.mean) x /= static_cast<double>(runs.size());
  for (const auto& r : runs) {
    for (std::size_t i = 0; i < dim; ++i) {
      const double dev = r[i] - out.mean[i];
      out.variance[i] += dev * dev;
    }
  }
  for (double& x : out.variance) x /= static_cast<double>(runs.size() - 1);
  return out;
}

}  // namespace locshap
