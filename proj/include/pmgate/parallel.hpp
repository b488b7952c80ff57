#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace pmgate {

// Runs fn(i) for i in [0, n) on `workers` threads with strided assignment.
// Callers write results by index, so the output never depends on the
// worker count or completion order.
template <typename F>
void parallel_for(std::size_t n, unsigned workers, F&& fn) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (workers > n) workers = unsigned(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&fn, w, workers, n] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    for (auto& th : pool) th.join();
}

} // namespace pmgate
