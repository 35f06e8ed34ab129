#ifndef AFFECT_CORE_PARALLEL_HPP
#define AFFECT_CORE_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace affect {

// Runs fn(0..count-1) on up to `jobs` threads. Work items must write only to
// their own slots; reductions happen after the join, in index order, so
// results are identical for any jobs value.
inline void parallel_for(std::size_t count, int jobs,
                         const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    threads.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) {
        threads.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
                fn(i);
        });
    }
    for (auto& th : threads) th.join();
}

} // namespace affect

#endif
