#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace vbgi {

inline int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(row) for every row in [0, rows). Rows are interleaved across
/// workers; each row is processed by exactly one worker, so callers that
/// write only their own row get scheduling-independent results.
template <typename Body>
void parallel_rows(int rows, int threads, Body&& body) {
    const int workers = std::min(resolve_thread_count(threads), std::max(rows, 1));
    if (workers <= 1) {
        for (int y = 0; y < rows; ++y) body(y);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int y = w; y < rows; y += workers) body(y);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace vbgi
