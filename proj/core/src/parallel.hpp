#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hofbauer::detail {

inline constexpr std::size_t kBlock = 128;

// Runs work(acc, begin, end) on fixed-size blocks and folds the block
// results in block order, so the outcome does not depend on the thread count.
template <class Acc, class Make, class Work, class Merge>
Acc block_reduce(std::size_t count, int threads, Make make, Work work, Merge merge) {
    const std::size_t nblocks = (count + kBlock - 1) / kBlock;
    std::vector<Acc> parts;
    parts.reserve(nblocks);
    for (std::size_t b = 0; b < nblocks; ++b) parts.push_back(make());

    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto run = [&] {
        for (;;) {
            const std::size_t b = next.fetch_add(1);
            if (b >= nblocks) return;
            try {
                work(parts[b], b * kBlock, std::min(count, (b + 1) * kBlock));
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
                next.store(nblocks);
                return;
            }
        }
    };
    const int nt = std::max(1, std::min<int>(threads, static_cast<int>(nblocks)));
    if (nt <= 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nt; ++t) pool.emplace_back(run);
        for (auto& th : pool) th.join();
    }
    if (err) std::rethrow_exception(err);

    Acc total = make();
    for (const Acc& p : parts) merge(total, p);
    return total;
}

} // namespace hofbauer::detail
