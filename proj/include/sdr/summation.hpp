#pragma once

// Pairwise (cascade) summation: error grows like log n instead of n, and the
// result depends only on the order of the terms.

#include <cstddef>
#include <span>

namespace sdr {

template <typename T>
T pairwise_sum(std::span<const T> x) {
    constexpr std::size_t kBlock = 8;
    if (x.size() <= kBlock) {
        T s{};
        for (const T& v : x) s += v;
        return s;
    }
    const std::size_t half = x.size() / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

}  // namespace sdr
