#include "wedge/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace wedge {

int resolve_workers(int requested) noexcept {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("WEDGE_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v < 1 << 16)
            return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

// Spawns `count` threads running task(i), joins them all, and rethrows the
// first captured exception.
void run_on_threads(std::size_t count,
                    const std::function<void(std::size_t)>& task) {
    if (count == 1) {
        task(0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(count);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (std::size_t i = 0; i < count; ++i) {
        pool.emplace_back([&, i] {
            try {
                task(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

void parallel_ranges(std::size_t n, std::size_t min_chunk, int workers,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    if (min_chunk == 0) min_chunk = 1;
    const std::size_t w = workers > 0 ? static_cast<std::size_t>(workers) : 1;
    std::size_t chunk = (n + w - 1) / w;
    if (chunk < min_chunk) chunk = min_chunk;
    const std::size_t ranges = (n + chunk - 1) / chunk;
    run_on_threads(ranges, [&](std::size_t i) {
        const std::size_t begin = i * chunk;
        const std::size_t end = begin + chunk < n ? begin + chunk : n;
        fn(begin, end);
    });
}

void parallel_chunks(std::size_t num_chunks, int workers,
                     const std::function<void(std::size_t)>& fn) {
    if (num_chunks == 0) return;
    std::size_t w = workers > 0 ? static_cast<std::size_t>(workers) : 1;
    if (w > num_chunks) w = num_chunks;
    std::atomic<std::size_t> next{0};
    run_on_threads(w, [&](std::size_t) {
        for (;;) {
            const std::size_t k = next.fetch_add(1, std::memory_order_relaxed);
            if (k >= num_chunks) break;
            fn(k);
        }
    });
}

}  // namespace wedge
