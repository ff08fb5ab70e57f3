#pragma once

#include <algorithm>
#include <cstddef>
#include <future>
#include <vector>

namespace izeno::detail {

// Evaluates fn(i) for i < n on up to `threads` workers; results keep index order.
template <class F>
auto parallel_map(std::size_t n, int threads, F&& fn) {
    using R = decltype(fn(std::size_t{0}));
    std::vector<R> out(n);
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n, static_cast<std::size_t>(threads)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < n; i += workers) out[i] = fn(i);
        }));
    }
    for (auto& j : jobs) j.get();
    return out;
}

}  // namespace izeno::detail
