#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace sdmt::detail {

inline constexpr std::uint64_t kBatchSize = 32768;

// Runs per_batch(batch_index, first_trial, last_trial) over a fixed partition
// of [0, trials) and returns the per-batch results in batch order, so the
// reduction (and therefore every derived number) is independent of the worker
// count and of scheduling.
template <class Acc, class Fn>
std::vector<Acc> run_batches(std::uint64_t trials, int workers, Fn&& per_batch) {
  const std::uint64_t n_batches = (trials + kBatchSize - 1) / kBatchSize;
  std::vector<Acc> partial(n_batches);
  auto work = [&](std::uint64_t b) {
    const std::uint64_t lo = b * kBatchSize;
    const std::uint64_t hi = std::min(lo + kBatchSize, trials);
    partial[b] = per_batch(b, lo, hi);
  };
  const int n_workers = int(std::min<std::uint64_t>(std::uint64_t(workers), n_batches));
  if (n_workers <= 1) {
    for (std::uint64_t b = 0; b < n_batches; ++b) work(b);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(n_workers));
    for (int w = 0; w < n_workers; ++w)
      pool.emplace_back([&] {
        for (std::uint64_t b = next.fetch_add(1); b < n_batches; b = next.fetch_add(1))
          work(b);
      });
    for (auto& th : pool) th.join();
  }
  return partial;
}

}  // namespace sdmt::detail
