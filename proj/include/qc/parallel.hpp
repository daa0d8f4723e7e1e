#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace qc {

// Splits [begin, end) into at most `threads` contiguous chunks and runs
// fn(lo, hi, chunk) for each, concurrently when threads > 1. The first
// exception thrown by any chunk is rethrown after all chunks finish.
template <class Fn>
void parallel_chunks(long begin, long end, int threads, Fn&& fn) {
    const long n = std::max(0L, end - begin);
    const long t = std::clamp<long>(threads, 1, std::max(1L, n));
    if (t <= 1) {
        fn(begin, end, 0);
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(t));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(t));
    for (long c = 0; c < t; ++c) {
        const long lo = begin + n * c / t;
        const long hi = begin + n * (c + 1) / t;
        pool.emplace_back([&, lo, hi, c] {
            try {
                fn(lo, hi, static_cast<int>(c));
            } catch (...) {
                errors[static_cast<std::size_t>(c)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace qc
