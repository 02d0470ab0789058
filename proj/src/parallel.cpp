#include "gct/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace gct {

int default_workers() {
  if (const char* env = std::getenv("GCT_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w > 0) return w;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int n_tasks, int workers, const std::function<void(int, int)>& fn) {
  if (n_tasks <= 0) return;
  if (workers <= 0) workers = default_workers();
  workers = std::min(workers, n_tasks);
  std::atomic<int> next{0};
  std::mutex mu;
  int failed_task = n_tasks;
  std::exception_ptr failure;
  auto body = [&](int worker) {
    for (;;) {
      const int task = next.fetch_add(1);
      if (task >= n_tasks) return;
      try {
        fn(task, worker);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (task < failed_task) {
          failed_task = task;
          failure = std::current_exception();
        }
      }
    }
  };
  if (workers == 1) {
    body(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(body, w);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace gct
