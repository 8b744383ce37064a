#pragma once

// Deterministic batched execution. Work is split into fixed-size batches that
// are independent of the worker count; results are merged in batch order, so
// a run is reproducible from (seed, batch size) alone.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace regulink {

// --workers flag, else REGULINK_WORKERS, else hardware concurrency (>= 1).
int resolve_workers(std::optional<int> requested = std::nullopt);

struct BatchPlan {
  long long total = 0;
  long long batch_size = 4096;
  int workers = 1;

  long long batches() const { return (total + batch_size - 1) / batch_size; }
  long long begin(long long batch) const { return batch * batch_size; }
  long long count(long long batch) const {
    return std::min(batch_size, total - batch * batch_size);
  }
};

// Runs fn(batch_index, count) for every batch on plan.workers threads and
// returns the per-batch results in batch order. The first exception thrown by
// any batch is rethrown after all workers stop.
template <class Result, class Fn>
std::vector<Result> run_batches(const BatchPlan& plan, Fn fn) {
  const long long n = plan.batches();
  std::vector<Result> results(static_cast<std::size_t>(n));
  std::atomic<long long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const long long b = next.fetch_add(1);
      if (b >= n) {
        return;
      }
      try {
        results[static_cast<std::size_t>(b)] = fn(b, plan.count(b));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
        next.store(n);
        return;
      }
    }
  };
  const int workers = static_cast<int>(std::max<long long>(1, std::min<long long>(plan.workers, n)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back(worker);
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return results;
}

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      compensation_ += (sum_ - t) + v;
    } else {
      compensation_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace regulink
