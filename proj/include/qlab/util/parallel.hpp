#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace qlab {

/// Chunked parallel loop over [0, count). Results must be written to
/// index-addressed slots so the outcome is identical for any thread count.
template <typename Body>
void parallel_for(std::size_t count, int threads, Body&& body) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(threads), count > 0 ? count : 1);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace qlab
