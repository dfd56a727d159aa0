#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace moatwalk::detail {

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    if (const char* env = std::getenv("MOATWALK_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs fn(block_index) for block_index in [0, blocks). Blocks must write to
// disjoint state so the result is independent of the thread count.
template <typename Fn>
void parallel_blocks(std::size_t blocks, unsigned threads, Fn&& fn) {
    threads = resolve_threads(threads);
    if (threads <= 1 || blocks <= 1) {
        for (std::size_t b = 0; b < blocks; ++b) fn(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t b = next.fetch_add(1);
            if (b >= blocks) return;
            fn(b);
        }
    };
    std::vector<std::thread> pool;
    unsigned n = threads < blocks ? threads : static_cast<unsigned>(blocks);
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace moatwalk::detail
