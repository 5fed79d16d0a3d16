#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace fermionlab {

/// Worker count, capped by FERMIONLAB_THREADS when set.
inline unsigned thread_budget() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("FERMIONLAB_THREADS")) {
        try {
            long v = std::stol(env);
            if (v >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
        } catch (...) {
        }
    }
    return hw;
}

/// Runs body(i) for i in [0, n). Each index is visited once; the body must only
/// write to slot i of a pre-sized output.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    unsigned workers = std::min<std::size_t>(thread_budget(), n == 0 ? 1 : n);
    if (workers <= 1 || n < 64) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace fermionlab
