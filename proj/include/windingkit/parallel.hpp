#ifndef WINDINGKIT_PARALLEL_HPP
#define WINDINGKIT_PARALLEL_HPP

#include <algorithm>
#include <thread>
#include <vector>

namespace wk {

// Process-wide worker count for parallel_for; 0 = hardware concurrency.
inline int& thread_count() {
  static int n = 0;
  return n;
}

// Static strided partition over [0, n). Each index is handled by exactly one
// worker and writes only its own outputs, so results are bit-reproducible
// regardless of the worker count.
template <class F>
void parallel_for(std::size_t n, F&& body) {
  int nw = thread_count() > 0 ? thread_count()
                              : static_cast<int>(std::thread::hardware_concurrency());
  nw = std::clamp(nw, 1, 64);
  if (nw == 1 || n < 2) {
    for (std::size_t i = 0; i < n; i++) body(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(nw);
  for (int t = 0; t < nw; t++)
    workers.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += nw) body(i);
    });
  for (auto& w : workers) w.join();
}

}  // namespace wk

#endif
