#ifndef ALTCLUST_DETAIL_PARALLEL_HPP
#define ALTCLUST_DETAIL_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace altclust::detail {

/// Worker cap: ALTCLUST_THREADS env var, defaulting to the available cores.
inline unsigned worker_count() {
    if (const char* env = std::getenv("ALTCLUST_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/// Runs fn(i) for i in [0, count). Each index is claimed exactly once; the
/// caller must make fn(i) write only to slot i so results are independent of
/// scheduling.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(worker_count(), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace altclust::detail

#endif
