#pragma once
// Deterministic fork-join map: items are processed on up to DWORKLAB_THREADS
// workers (default: hardware concurrency) writing to disjoint output slots, so
// the result order — and therefore every downstream reduction — is independent
// of scheduling.

#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace dworklab {

inline int thread_budget() {
  if (const char* env = std::getenv("DWORKLAB_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

template <class Out, class Fn>
std::vector<Out> parallel_map(size_t count, Fn fn) {
  std::vector<Out> out(count);
  int workers = std::min<size_t>(thread_budget(), count == 0 ? 1 : count);
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (size_t i = w; i < count; i += workers) out[i] = fn(i);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace dworklab
