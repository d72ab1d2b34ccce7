#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <type_traits>
#include <vector>

namespace benfrag {

/// 0 means "one per hardware thread".
inline std::size_t resolve_workers(std::size_t requested)
{
  if (requested != 0)
    return requested;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Evaluates `fn(i)` for i in [0, count) on up to `workers` threads and
/// returns the results in index order. Since every index writes its own slot,
/// the output is independent of the worker count.
template<class Fn>
auto parallel_map(std::size_t count, std::size_t workers, Fn&& fn)
  -> std::vector<std::invoke_result_t<Fn&, std::size_t>>
{
  using Result = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<Result> out(count);
  workers = std::min(resolve_workers(workers), std::max<std::size_t>(count, 1));

  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      out[i] = fn(i);
    return out;
  }

  constexpr std::size_t chunk = 64;
  std::atomic<std::size_t> next{ 0 };
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    try {
      for (;;) {
        const std::size_t begin = next.fetch_add(chunk);
        if (begin >= count)
          return;
        const std::size_t end = std::min(count, begin + chunk);
        for (std::size_t i = begin; i < end; ++i)
          out[i] = fn(i);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure)
        failure = std::current_exception();
      next.store(count);
    }
  };

  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back(work);
  }
  if (failure)
    std::rethrow_exception(failure);
  return out;
}

/// Fixed-shape pairwise summation: the association order depends only on
/// the length of the input.
double pairwise_sum(std::span<const double> values);

} // namespace benfrag
