#pragma once
// Trial-level parallelism. Per-trial work must derive all randomness from
// the trial index alone; local accumulators merge in worker order, so the
// result is independent of the degree of parallelism.

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace disjlab {

template <class Acc, class PerTrial, class Merge>
Acc run_trials(std::uint64_t trials, unsigned jobs, PerTrial per_trial,
               Merge merge) {
  if (jobs <= 1 || trials < 2) {
    Acc acc{};
    for (std::uint64_t i = 0; i < trials; ++i) per_trial(i, acc);
    return acc;
  }
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(jobs, trials));
  std::vector<Acc> parts(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const std::uint64_t chunk = (trials + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      const std::uint64_t lo = w * chunk;
      const std::uint64_t hi = std::min(trials, lo + chunk);
      for (std::uint64_t i = lo; i < hi; ++i) per_trial(i, parts[w]);
    });
  }
  for (auto& t : threads) t.join();
  Acc acc{};
  for (Acc& p : parts) merge(acc, p);
  return acc;
}

unsigned default_jobs();

}  // namespace disjlab
