#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace sl {

// 0 means: SOLITON_LAB_THREADS if set, else hardware concurrency
void set_thread_limit(int n);
int thread_limit();

// static contiguous partition; each index is visited exactly once
template <typename F>
void parallel_for(std::ptrdiff_t n, F&& f)
{
    const std::ptrdiff_t workers = std::min<std::ptrdiff_t>(thread_limit(), n);
    if (workers <= 1) {
        for (std::ptrdiff_t i = 0; i < n; ++i)
            f(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::ptrdiff_t w = 0; w < workers; ++w) {
        const std::ptrdiff_t lo = n * w / workers, hi = n * (w + 1) / workers;
        pool.emplace_back([lo, hi, &f] {
            for (std::ptrdiff_t i = lo; i < hi; ++i)
                f(i);
        });
    }
    for (auto& t : pool)
        t.join();
}

}
