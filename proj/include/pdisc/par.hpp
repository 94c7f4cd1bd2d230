#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace pdisc {

// Static-partition parallel for. Each index writes only its own slot, so the
// result is independent of scheduling; reductions are done serially by the
// caller over the filled slots.
inline void parallel_for(int n, const std::function<void(int)>& body) {
    if (n <= 0) return;
    unsigned hw = std::thread::hardware_concurrency();
    int nthreads = static_cast<int>(std::max(1u, hw));
    nthreads = std::min(nthreads, n);
    if (nthreads == 1 || n < 16) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nthreads));
    std::exception_ptr error;
    std::mutex errmtx;
    for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t]() {
            const int lo = static_cast<int>(static_cast<long long>(n) * t / nthreads);
            const int hi = static_cast<int>(static_cast<long long>(n) * (t + 1) / nthreads);
            try {
                for (int i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(errmtx);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace pdisc
