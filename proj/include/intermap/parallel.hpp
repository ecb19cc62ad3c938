#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace intermap {

/// Runs `run(task)` for task = 0..n_tasks-1 on `workers` threads.
/// Each task writes into its own result slot; the caller reduces the
/// slots in task order, so the merged result does not depend on the
/// worker count or scheduling.
template <typename Result>
std::vector<Result> run_tasks(std::size_t n_tasks, unsigned workers,
                              const std::function<Result(std::size_t)>& run) {
    std::vector<Result> results(n_tasks);
    if (workers <= 1 || n_tasks <= 1) {
        for (std::size_t t = 0; t < n_tasks; ++t) results[t] = run(t);
        return results;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t t = w; t < n_tasks; t += workers) results[t] = run(t);
        });
    }
    for (auto& th : pool) th.join();
    return results;
}

} // namespace intermap
