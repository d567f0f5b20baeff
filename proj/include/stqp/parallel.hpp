#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace stqp {

/// Splits [0, total) into fixed-size chunks and maps fn(begin, end) over them
/// on up to `threads` workers. Results come back in chunk order, and the chunk
/// boundaries do not depend on the worker count, so any reduction done in
/// chunk order is bit-identical for every thread count.
template <class Fn>
auto map_chunks(std::uint64_t total, std::uint64_t chunk, unsigned threads, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, std::uint64_t, std::uint64_t>> {
  using R = std::invoke_result_t<Fn&, std::uint64_t, std::uint64_t>;
  chunk = std::max<std::uint64_t>(chunk, 1);
  const std::uint64_t chunks = (total + chunk - 1) / chunk;
  std::vector<R> out(chunks);
  auto run = [&](std::uint64_t c) { out[c] = fn(c * chunk, std::min(total, (c + 1) * chunk)); };

  const auto workers = static_cast<unsigned>(
      std::min<std::uint64_t>(std::max(threads, 1U), std::max<std::uint64_t>(chunks, 1)));
  if (workers <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run(c);
    return out;
  }

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t c; (c = next.fetch_add(1)) < chunks;) {
          try {
            run(c);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = chunks;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace stqp
