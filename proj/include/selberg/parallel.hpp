#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace selberg {

// fn(begin, end) over contiguous blocks of [0, n).  Callers write into
// per-index slots, so results never depend on the thread count.
template <class F>
void parallel_for(std::size_t n, int threads, F&& fn) {
    const std::size_t t = std::clamp<std::size_t>(threads < 1 ? 1 : std::size_t(threads), 1, std::max<std::size_t>(n, 1));
    if (t == 1 || n < 64) {
        fn(std::size_t(0), n);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(t);
    const std::size_t chunk = (n + t - 1) / t;
    for (std::size_t k = 0; k < t; ++k) {
        const std::size_t lo = k * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, k, lo, hi] {
            try {
                fn(lo, hi);
            } catch (...) {
                errs[k] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

}  // namespace selberg
