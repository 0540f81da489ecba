#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace kppw {

/// Thread cap: KPPW_THREADS when set (>= 1), hardware concurrency otherwise.
inline unsigned thread_cap()
{
    if (const char* env = std::getenv("KPPW_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1)
            return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/// Run fn(0..count-1) on up to thread_cap() threads; items must be independent.
inline void parallel_for(size_t count, const std::function<void(size_t)>& fn)
{
    const unsigned workers = std::min<size_t>(thread_cap(), count);
    if (workers <= 1) {
        for (size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (size_t i = w; i < count; i += workers)
                fn(i);
        });
    for (auto& t : pool)
        t.join();
}

} // namespace kppw
