#pragma once

#include <functional>

namespace gct {

// GCT_WORKERS if set, otherwise the hardware thread count.
int default_workers();

// Runs fn(task, worker) for task in [0, n_tasks) on up to `workers` threads.
// Tasks are handed out in index order; the exception from the lowest failing
// task index is rethrown after all threads finish.
void parallel_for(int n_tasks, int workers, const std::function<void(int task, int worker)>& fn);

}  // namespace gct
