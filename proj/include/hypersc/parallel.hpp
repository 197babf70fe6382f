#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hypersc {

namespace detail {
inline std::atomic<unsigned>& thread_setting() {
    static std::atomic<unsigned> n{0};
    return n;
}
}  // namespace detail

// 0 means "ask the environment": HYPERSC_THREADS, then hardware_concurrency.
inline void set_thread_count(unsigned n) { detail::thread_setting() = n; }

inline unsigned thread_count() {
    unsigned n = detail::thread_setting();
    if (n != 0) return n;
    if (const char* env = std::getenv("HYPERSC_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(block) for block in [0, blocks). The block decomposition is fixed by
// the caller, so per-block results combined in block order do not depend on
// how many threads pick them up.
template <class Body>
void for_each_block(std::size_t blocks, Body&& body) {
    unsigned workers = std::min<std::size_t>(thread_count(), blocks);
    if (workers <= 1) {
        for (std::size_t b = 0; b < blocks; ++b) body(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t b = next.fetch_add(1);
                if (b >= blocks) return;
                try {
                    body(b);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

// Map every block to a partial result, then fold in block order.
template <class R, class Map, class Fold>
R map_reduce_blocks(std::size_t blocks, R init, Map&& map, Fold&& fold) {
    std::vector<R> parts(blocks, init);
    for_each_block(blocks, [&](std::size_t b) { parts[b] = map(b); });
    R acc = std::move(init);
    for (auto& p : parts) acc = fold(std::move(acc), std::move(p));
    return acc;
}

}  // namespace hypersc
