#pragma once

// Independent reference implementations used only by tests. These stay
// deliberately naive (vector shuffling, breadth-first search) so they cannot
// share a defect with the library code they check.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

#include "rulelat/lattice.hpp"

namespace oracles {

// Straight-line transcription of the published elimination scheme:
// keep the right endpoint of every gap wider than lmin, union with the
// walls, sort, deduplicate. Returns the full point list including walls.
inline std::vector<double> reference_threat_boundaries(std::vector<double> interior,
                                                       double lmin) {
    std::vector<double> xn;
    xn.push_back(0.0);
    xn.insert(xn.end(), interior.begin(), interior.end());
    xn.push_back(1.0);
    std::sort(xn.begin(), xn.end());

    std::vector<double> gaps(xn.size() - 1);
    for (std::size_t i = 0; i + 1 < xn.size(); ++i) {
        gaps[i] = xn[i + 1] - xn[i];
    }

    std::vector<double> xt;
    xt.push_back(0.0);
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        if (gaps[i] > lmin) {
            xt.push_back(xn[i + 1]);
        }
    }
    xt.push_back(1.0);
    std::sort(xt.begin(), xt.end());
    xt.erase(std::unique(xt.begin(), xt.end()), xt.end());
    return xt;
}

struct BruteClusters {
    std::vector<std::size_t> sizes;   // ascending
    bool spanning = false;
    std::optional<double> size_weighted_mean;
};

inline BruteClusters brute_force_clusters(const rulelat::Lattice& lattice,
                                          const std::vector<std::uint8_t>& occupied) {
    const std::size_t n = lattice.site_count();
    std::vector<std::uint8_t> on_low(n, 0);
    std::vector<std::uint8_t> on_high(n, 0);
    for (const std::int32_t s : lattice.low_face()) {
        on_low[s] = 1;
    }
    for (const std::int32_t s : lattice.high_face()) {
        on_high[s] = 1;
    }

    BruteClusters result;
    std::vector<std::uint8_t> visited(n, 0);
    double sum_sq = 0.0;
    std::size_t sum = 0;
    for (std::size_t start = 0; start < n; ++start) {
        if (!occupied[start] || visited[start]) {
            continue;
        }
        std::size_t size = 0;
        bool low = false;
        bool high = false;
        std::queue<std::int32_t> frontier;
        frontier.push(static_cast<std::int32_t>(start));
        visited[start] = 1;
        while (!frontier.empty()) {
            const std::int32_t s = frontier.front();
            frontier.pop();
            ++size;
            low = low || on_low[s];
            high = high || on_high[s];
            for (const std::int32_t t : lattice.neighbors(s)) {
                if (occupied[t] && !visited[t]) {
                    visited[t] = 1;
                    frontier.push(t);
                }
            }
        }
        result.sizes.push_back(size);
        result.spanning = result.spanning || (low && high);
        sum_sq += static_cast<double>(size) * static_cast<double>(size);
        sum += size;
    }
    std::sort(result.sizes.begin(), result.sizes.end());
    if (sum > 0) {
        result.size_weighted_mean = sum_sq / static_cast<double>(sum);
    }
    return result;
}

} // namespace oracles
