#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace delta3 {

/// Runs fn(i) for i in [0, n) over `jobs` threads in contiguous chunks.  fn
/// returns an empty optional on success and a witness string on failure; the
/// overall result is the failure with the smallest index, independent of thread
/// scheduling.
template <class Fn>
std::optional<std::pair<std::int64_t, std::string>> parallel_first_failure(std::int64_t n,
                                                                           int jobs, Fn&& fn) {
    if (jobs < 1) jobs = 1;
    jobs = std::min<std::int64_t>(jobs, std::max<std::int64_t>(n, 1));
    if (jobs == 1) {
        for (std::int64_t i = 0; i < n; ++i)
            if (auto w = fn(i)) return std::make_pair(i, *w);
        return std::nullopt;
    }
    std::vector<std::optional<std::pair<std::int64_t, std::string>>> results(jobs);
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    const std::int64_t chunk = (n + jobs - 1) / jobs;
    for (int t = 0; t < jobs; ++t) {
        const std::int64_t lo = t * chunk;
        const std::int64_t hi = std::min(n, lo + chunk);
        workers.emplace_back([&results, t, lo, hi, &fn]() {
            for (std::int64_t i = lo; i < hi; ++i) {
                if (auto w = fn(i)) {
                    results[t] = std::make_pair(i, *w);
                    return;
                }
            }
        });
    }
    for (auto& w : workers) w.join();
    for (const auto& r : results)
        if (r) return r;
    return std::nullopt;
}

}  // namespace delta3
