#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace hvvi {

/// Chunked parallel loop over [0, n). Each index is processed exactly once;
/// callers write results into index-addressed slots, so the outcome is
/// identical for every worker count.
inline void parallel_for(std::size_t n, int workers,
                         const std::function<void(std::size_t)>& body) {
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    std::vector<std::thread> threads;
    threads.reserve(w);
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    for (std::size_t t = 0; t < w; ++t) {
        threads.emplace_back([&, t] {
            const std::size_t lo = t * n / w;
            const std::size_t hi = (t + 1) * n / w;
            try {
                for (std::size_t i = lo; i < hi && !failed.load(std::memory_order_relaxed); ++i)
                    body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : threads) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace hvvi
