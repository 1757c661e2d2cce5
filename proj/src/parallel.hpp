#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rulelat::detail {

// Runs worker(block) for every block in [0, n_blocks) across up to `threads`
// workers (0 = hardware width). make_worker() is invoked once per worker so
// each can own scratch buffers. Blocks are claimed from a shared counter;
// callers must make per-block results independent of the schedule.
template <typename MakeWorker>
void parallel_blocks(std::size_t n_blocks, unsigned threads, MakeWorker&& make_worker) {
    unsigned width = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
    if (n_blocks < width) {
        width = static_cast<unsigned>(n_blocks);
    }
    if (width <= 1) {
        auto worker = make_worker();
        for (std::size_t b = 0; b < n_blocks; ++b) {
            worker(b);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    std::vector<std::thread> pool;
    pool.reserve(width);
    for (unsigned i = 0; i < width; ++i) {
        pool.emplace_back([&] {
            try {
                auto worker = make_worker();
                for (std::size_t b = next.fetch_add(1); b < n_blocks; b = next.fetch_add(1)) {
                    worker(b);
                }
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace rulelat::detail
