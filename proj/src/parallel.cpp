#include "holonorm/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace holonorm {

unsigned worker_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HOLONORM_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
        } catch (const std::exception&) {
            // malformed value: ignore the cap
        }
    }
    return n;
}

unsigned resolve_threads(unsigned requested) {
    const unsigned cap = worker_count();
    return requested == 0 ? cap : std::min(requested, cap);
}

void parallel_for(std::size_t n_tasks, unsigned threads,
                  const std::function<void(std::size_t, unsigned)>& body) {
    if (n_tasks == 0) return;
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::size_t>(n_tasks, 1u << 16))));
    if (threads == 1) {
        for (std::size_t t = 0; t < n_tasks; ++t) body(t, 0);
        return;
    }
    const std::size_t chunk = std::max<std::size_t>(1, n_tasks / (std::size_t{threads} * 16));
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            for (;;) {
                const std::size_t begin = next.fetch_add(chunk);
                if (begin >= n_tasks) break;
                const std::size_t end = std::min(n_tasks, begin + chunk);
                for (std::size_t t = begin; t < end; ++t) body(t, w);
            }
        });
    }
}

}  // namespace holonorm
