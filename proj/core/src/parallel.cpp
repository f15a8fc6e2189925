#include "synthbench/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace synthbench {

namespace {
std::atomic<unsigned> g_workers{0};
}

void set_worker_budget(unsigned workers) { g_workers.store(workers); }

unsigned worker_budget() { return g_workers.load(); }

unsigned effective_workers(std::size_t n) {
    unsigned w = g_workers.load();
    if (w == 0) w = std::max(1u, std::thread::hardware_concurrency());
    if (n < w) w = static_cast<unsigned>(n);
    return std::max(1u, w);
}

void parallel_for_blocks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    const unsigned workers = effective_workers(n);
    if (workers == 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned t = 0; t < workers; ++t) {
        const std::size_t begin = static_cast<std::size_t>(t) * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        threads.emplace_back(fn, begin, end);
    }
    for (std::thread& t : threads) t.join();
}

}  // namespace synthbench
