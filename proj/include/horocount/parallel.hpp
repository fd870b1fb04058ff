#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace horocount {

/// 0 means "hardware parallelism".
inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs fn(begin, end, chunk_index) over `chunks` contiguous chunks of
/// [0, count) using up to `threads` workers. Chunk boundaries depend only on
/// `count` and `chunks`, never on the thread count, so per-chunk results can
/// be merged deterministically. The first exception is rethrown.
template <class Fn>
void parallel_chunks(std::size_t count, std::size_t chunks, unsigned threads, Fn&& fn) {
    if (count == 0) return;
    chunks = std::max<std::size_t>(1, std::min(chunks, count));
    auto bounds = [&](std::size_t c) { return count * c / chunks; };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
    if (threads == 1) {
        for (std::size_t c = 0; c < chunks; ++c) fn(bounds(c), bounds(c + 1), c);
        return;
    }
    std::mutex mu;
    std::exception_ptr error;
    std::size_t next = 0;
    auto worker = [&] {
        while (true) {
            std::size_t c;
            {
                std::lock_guard lock(mu);
                if (next >= chunks || error) return;
                c = next++;
            }
            try {
                fn(bounds(c), bounds(c + 1), c);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!error) error = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
}

} // namespace horocount
