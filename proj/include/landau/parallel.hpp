#ifndef LANDAU_PARALLEL_HPP
#define LANDAU_PARALLEL_HPP

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace landau {

// Runs fn(task, worker) for task = 0..n_tasks-1 on n_threads workers.
// Callers must make results independent of the task->worker assignment
// (task-indexed output slots, or exact integer accumulators per worker).
inline void parallel_for(int n_tasks, int n_threads,
                         const std::function<void(int, int)>& fn) {
    n_threads = std::max(1, n_threads);
    if (n_threads == 1 || n_tasks <= 1) {
        for (int t = 0; t < n_tasks; ++t) fn(t, 0);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    for (int w = 0; w < n_threads; ++w) {
        pool.emplace_back([&, w] {
            for (;;) {
                int t = next.fetch_add(1);
                if (t >= n_tasks) break;
                try {
                    fn(t, w);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mu);
                    if (!err) err = std::current_exception();
                    break;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

inline int hardware_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

} // namespace landau

#endif
