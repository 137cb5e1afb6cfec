#ifndef SPHEREWAVE_DETAIL_PARALLEL_HPP
#define SPHEREWAVE_DETAIL_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace spherewave::detail {

// Worker count: min(hardware, SPHEREWAVE_THREADS) with a floor of 1.
inline int thread_count()
{
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("SPHEREWAVE_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return n;
}

// Static block partition of [0, n). Each index is processed exactly once and
// writes only to its own output slots, so results do not depend on the
// number of threads or the schedule.
template <typename F>
void parallel_for(std::size_t n, F&& body)
{
    const int nt = std::min<std::size_t>(thread_count(), n ? n : 1);
    if (nt <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mtx;
    for (int t = 0; t < nt; ++t) {
        const std::size_t lo = n * t / nt;
        const std::size_t hi = n * (t + 1) / nt;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> g(err_mtx);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

} // namespace spherewave::detail

#endif
