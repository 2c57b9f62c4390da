// Minimal data-parallel loop over an index range.
#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace chtrecon {

// Runs f(i) for i in [begin, end) on up to n_threads threads (0 = hardware
// concurrency).  The first exception thrown by any worker is rethrown.
template <class F>
void parallel_for(int begin, int end, int n_threads, F&& f) {
    const int count = end - begin;
    if (count <= 0) return;
    int threads = n_threads > 0 ? n_threads : int(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, count);
    if (threads == 1) {
        for (int i = begin; i < end; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    const int chunk = (count + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int lo = begin + t * chunk;
        const int hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                for (int i = lo; i < hi; ++i) f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace chtrecon
