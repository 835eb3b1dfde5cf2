#pragma once

// Deterministic parallel helpers. Work is split into fixed contiguous chunks
// whose boundaries depend only on (n, threads); each chunk writes to disjoint
// output slots, so results are bitwise independent of scheduling. Reductions
// happen sequentially over the chunk results afterwards.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace invsum {

// "auto" (or empty) resolves to the hardware concurrency; otherwise a positive count.
inline int resolve_threads(const std::string& spec) {
    if (spec.empty() || spec == "auto") {
        unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw);
    }
    int n;
    try {
        size_t pos = 0;
        n = std::stoi(spec, &pos);
        if (pos != spec.size()) throw std::invalid_argument(spec);
    } catch (const std::exception&) {
        throw std::domain_error("thread count must be a positive integer or \"auto\"");
    }
    if (n < 1) throw std::domain_error("thread count must be a positive integer or \"auto\"");
    return n;
}

// Runs fn(begin, end) over [0, n) split into at most `threads` contiguous chunks.
// fn must only touch state disjoint between chunks.
template <typename Fn>
void parallel_for(std::int64_t n, int threads, Fn&& fn) {
    if (n <= 0) return;
    if (threads < 1) threads = 1;
    std::int64_t chunks = std::min<std::int64_t>(threads, n);
    if (chunks == 1) {
        fn(std::int64_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(chunks));
    std::int64_t base = n / chunks, rem = n % chunks, start = 0;
    for (std::int64_t c = 0; c < chunks; ++c) {
        std::int64_t len = base + (c < rem ? 1 : 0);
        std::int64_t begin = start, end = start + len;
        start = end;
        pool.emplace_back([begin, end, &fn] { fn(begin, end); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace invsum
