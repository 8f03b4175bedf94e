#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace coxcap {

inline unsigned worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs fn(begin, end) over contiguous blocks of [0, count) on worker
// threads. fn must only write to per-index slots, so results do not
// depend on the number of workers.
template <typename Fn>
void parallel_for_blocks(std::size_t count, Fn&& fn) {
    const unsigned workers = worker_count();
    if (count == 0) return;
    if (workers <= 1 || count < 2048) {
        fn(std::size_t{0}, count);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = static_cast<std::size_t>(w) * chunk;
        if (begin >= count) break;
        const std::size_t end = begin + chunk < count ? begin + chunk : count;
        threads.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& t : threads) t.join();
}

// Pairwise (tree) summation: deterministic result independent of worker
// count, and much lower rounding error than sequential accumulation.
inline double pairwise_sum(const double* data, std::size_t count) {
    if (count == 0) return 0.0;
    if (count <= 8) {
        double s = data[0];
        for (std::size_t i = 1; i < count; ++i) s += data[i];
        return s;
    }
    const std::size_t half = count / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, count - half);
}

inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(v.data(), v.size());
}

}  // namespace coxcap
