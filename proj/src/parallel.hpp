#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace certicos::detail {

inline unsigned resolve_workers(unsigned requested) {
    if (requested != 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Splits [0, total) into at most `workers` contiguous chunks and runs
// fn(begin, end, chunk_index) on each, joining before returning. Chunk
// boundaries depend only on `total` and the resolved worker count is not
// allowed to affect what fn computes -- callers keep per-index state.
template <typename Fn>
void run_chunked(uint64_t total, unsigned workers, Fn&& fn) {
    workers = resolve_workers(workers);
    if (total == 0) return;
    uint64_t nchunks = std::min<uint64_t>(workers, total);
    if (nchunks <= 1) {
        fn(uint64_t{0}, total, unsigned{0});
        return;
    }
    uint64_t per = (total + nchunks - 1) / nchunks;
    std::vector<std::thread> pool;
    pool.reserve(nchunks);
    for (uint64_t c = 0; c < nchunks; ++c) {
        uint64_t begin = c * per;
        uint64_t end = std::min(total, begin + per);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end, c] { fn(begin, end, static_cast<unsigned>(c)); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace certicos::detail
