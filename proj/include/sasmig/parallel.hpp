#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace sasmig {

namespace detail {
inline std::atomic<int>& thread_count_slot() {
  static std::atomic<int> count{0}; // 0 = use all hardware threads
  return count;
}
} // namespace detail

inline void set_thread_count(int n) { detail::thread_count_slot().store(n < 0 ? 0 : n); }

inline int thread_count() {
  int n = detail::thread_count_slot().load();
  if (n == 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, n);
}

/// Run fn(begin, end) over a static partition of [0, n). Each element is
/// computed by exactly one invocation with no shared mutable state, so the
/// result is identical for any thread count: parallel runs match serial
/// runs bit for bit as long as fn itself has no cross-element reductions.
template <typename Fn>
void parallel_for(Eigen::Index n, Fn&& fn) {
  if (n <= 0) return;
  const int want = thread_count();
  const Eigen::Index chunks = std::min<Eigen::Index>(want, n);
  if (chunks <= 1) {
    fn(Eigen::Index{0}, n);
    return;
  }
  const Eigen::Index base = n / chunks;
  const Eigen::Index rem = n % chunks;
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(chunks - 1));
  Eigen::Index begin = 0;
  for (Eigen::Index k = 0; k < chunks; ++k) {
    const Eigen::Index len = base + (k < rem ? 1 : 0);
    const Eigen::Index end = begin + len;
    if (k + 1 == chunks) {
      fn(begin, end);
    } else {
      workers.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    begin = end;
  }
  for (auto& w : workers) w.join();
}

} // namespace sasmig
