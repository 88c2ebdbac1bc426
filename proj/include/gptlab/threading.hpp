#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace gptlab {

/// Worker cap: min(hardware, GPTLAB_THREADS) when the variable is set.
inline int worker_count() {
    int hw = (int)std::thread::hardware_concurrency();
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("GPTLAB_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1 && cap < hw) hw = cap;
    }
    return hw;
}

/// Static block partition; results must be written to disjoint slots.
inline void parallel_for(int count, const std::function<void(int)>& body) {
    int workers = std::min(worker_count(), count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int i = w; i < count; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace gptlab
