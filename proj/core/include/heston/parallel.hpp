// SPDX-License-Identifier: Apache-2.0

#ifndef HESTON_PARALLEL_HPP
#define HESTON_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace heston {

// Runs fn(i) for every i in [0, n). Indices are distributed across a small
// thread pool when the machine has more than one core and the range is
// worth splitting; results must be written to per-index slots so the
// schedule cannot affect output. The first exception is rethrown after all
// workers join.
template <class F>
void parallel_for(std::size_t n, F&& fn) {
    const unsigned hw = std::thread::hardware_concurrency();
    const std::size_t workers = (hw > 1) ? std::min<std::size_t>(hw, n) : 1;
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::mutex mu;
    std::exception_ptr first;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < n; i += workers) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!first) first = std::current_exception();
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (first) std::rethrow_exception(first);
}

} // namespace heston

#endif // HESTON_PARALLEL_HPP
