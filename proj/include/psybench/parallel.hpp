#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace psybench {

// Runs fn(i) for i in [0, n). Work items write only to their own index, so
// the result is identical for any thread count. Exceptions are rethrown on
// the calling thread (first one wins).
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::size_t n_workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::vector<std::thread> pool;
    std::mutex err_mutex;
    std::exception_ptr error;
    std::vector<std::size_t> next_index(1, 0);
    std::mutex index_mutex;

    for (std::size_t w = 0; w < n_workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t i;
                {
                    std::lock_guard<std::mutex> lock(index_mutex);
                    if (next_index[0] >= n) return;
                    i = next_index[0]++;
                }
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace psybench
