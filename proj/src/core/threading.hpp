#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace conceft {

// Worker count: explicit parameter > CONCEFT_THREADS > hardware.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("CONCEFT_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Number of static chunks parallel_for_workers will use.
inline int worker_count(long long total, int threads) {
    threads = resolve_threads(threads);
    if (total < threads) threads = std::max(1, static_cast<int>(total));
    return threads;
}

// Static range partition over [0, total). Chunks write disjoint outputs, so
// results are bit-identical for any worker count. fn(worker, begin, end).
template <typename Fn>
void parallel_for_workers(long long total, int threads, Fn&& fn) {
    const int n = worker_count(total, threads);
    if (n == 1 || total <= 1) {
        fn(0, 0LL, total);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex err_mutex;
    const long long chunk = (total + n - 1) / n;
    for (int w = 0; w < n; ++w) {
        const long long begin = w * chunk;
        const long long end = std::min(total, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, w, begin, end] {
            try {
                fn(w, begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

template <typename Fn>
void parallel_for(long long total, int threads, Fn&& fn) {
    parallel_for_workers(total, threads, [&](int, long long begin, long long end) { fn(begin, end); });
}

}  // namespace conceft
