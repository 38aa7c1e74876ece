#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace liq {

// Runs fn(i) for i in [0, n) across up to `jobs` threads.
//
// Work is handed out through a shared atomic counter, so the order tasks run
// in is nondeterministic — callers must write results into per-index slots
// sized in advance and reduce in index order afterwards. That convention keeps
// every output byte-identical regardless of the job count.
//
// jobs <= 1 runs inline on the calling thread. The first exception thrown by
// any task is rethrown on the caller after all threads join.
template <class Fn>
void parallel_for(size_t n, int jobs, Fn&& fn) {
    if (n == 0) return;
    if (jobs <= 1 || n == 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    size_t n_threads = std::min<size_t>(static_cast<size_t>(jobs), n);
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
        while (true) {
            size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mu);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(n_threads);
    for (size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace liq
