// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace nhs {

/// Runs fn(i) for i in [0, n) over at most `threads` workers. Each index is
/// processed exactly once and workers write disjoint slots, so results do
/// not depend on the thread count. threads <= 1 runs inline.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace nhs
