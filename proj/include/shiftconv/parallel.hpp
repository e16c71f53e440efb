#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace shiftconv {

// Runs `body(block_index)` for block_index = 0..n_blocks-1 on up to `workers`
// threads. Callers accumulate per-block results into preallocated slots and
// combine them in block order afterwards, so the final reduction is
// independent of the worker count and bit-reproducible.
template <typename Body>
void run_blocks(std::int64_t n_blocks, int workers, Body&& body) {
    if (n_blocks <= 0) return;
    if (workers < 1) workers = 1;
    if (workers == 1 || n_blocks == 1) {
        for (std::int64_t b = 0; b < n_blocks; ++b) body(b);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&, t]() {
            for (std::int64_t b = t; b < n_blocks; b += workers) body(b);
        });
    }
    for (auto& th : pool) th.join();
}

inline int default_workers() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace shiftconv
