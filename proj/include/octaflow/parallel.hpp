#ifndef OCTAFLOW_PARALLEL_HPP
#define OCTAFLOW_PARALLEL_HPP

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace octaflow {

/// Index-parallel loop over [0, n). Workers share only immutable inputs and
/// write results keyed by index, so output is identical at any thread count.
/// The first exception thrown by a worker is rethrown on the caller.
template <typename F>
void parallel_for(std::int64_t n, int threads, F&& body) {
    threads = std::max(1, threads);
    if (threads == 1 || n < 2) {
        for (std::int64_t i = 0; i < n; ++i) body(i);
        return;
    }
    const int workers = static_cast<int>(std::min<std::int64_t>(threads, n));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::int64_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            const std::int64_t begin = w * chunk;
            const std::int64_t end = std::min(n, begin + chunk);
            try {
                for (std::int64_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace octaflow

#endif
