#include "icgb/peaks.hpp"

#include <algorithm>
#include <numeric>

namespace icgb {

std::vector<std::size_t> find_peaks(std::span<const double> x, const PeakConstraints& c) {
    const std::size_t n = x.size();
    std::vector<std::size_t> cand;
    if (n < 3) return cand;

    std::size_t i = 1;
    while (i + 1 < n) {
        if (x[i] > x[i - 1]) {
            std::size_t j = i;
            while (j + 1 < n && x[j + 1] == x[i]) ++j;
            if (j + 1 < n && x[j + 1] < x[i] && x[i] >= c.min_height) cand.push_back(i);
            i = j + 1;
        } else {
            ++i;
        }
    }
    if (cand.empty()) return cand;

    if (c.min_distance <= 1 && !c.max_count) return cand;

    std::vector<std::size_t> order(cand.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return x[cand[a]] > x[cand[b]]; });

    std::vector<char> removed(cand.size(), 0);
    std::vector<std::size_t> kept;
    const std::size_t limit = c.max_count.value_or(cand.size());
    for (std::size_t k : order) {
        if (kept.size() >= limit) break;
        if (removed[k]) continue;
        kept.push_back(cand[k]);
        for (std::size_t j = k; j-- > 0 && cand[k] - cand[j] < c.min_distance;) removed[j] = 1;
        for (std::size_t j = k + 1; j < cand.size() && cand[j] - cand[k] < c.min_distance; ++j)
            removed[j] = 1;
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

}  // namespace icgb
