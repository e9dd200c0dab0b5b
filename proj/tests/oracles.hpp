#pragma once

// Slow, obviously-correct reference implementations shared by the unit
// tests and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

// All strict local maxima (first index of a plateau), then greedy by
// height with ties to the smaller index, checked pairwise against every
// accepted peak.
inline std::vector<std::size_t> peaks(const std::vector<double>& x, std::size_t min_distance,
                                      double min_height, std::optional<std::size_t> max_count) {
    std::vector<std::size_t> cand;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        if (!(x[i - 1] < x[i])) continue;
        std::size_t j = i;
        while (j + 1 < x.size() && x[j + 1] == x[i]) ++j;
        if (j + 1 < x.size() && x[j + 1] < x[i] && x[i] >= min_height) cand.push_back(i);
    }
    std::vector<std::size_t> by_height = cand;
    std::sort(by_height.begin(), by_height.end(), [&](std::size_t a, std::size_t b) {
        return x[a] != x[b] ? x[a] > x[b] : a < b;
    });
    std::vector<std::size_t> accepted;
    for (std::size_t p : by_height) {
        if (max_count && accepted.size() == *max_count) break;
        bool ok = true;
        for (std::size_t q : accepted) {
            const std::size_t d = p > q ? p - q : q - p;
            if (d < min_distance) ok = false;
        }
        if (ok) accepted.push_back(p);
    }
    std::sort(accepted.begin(), accepted.end());
    return accepted;
}

// Random sequence with deliberate plateaus and repeated values.
inline std::vector<double> random_sequence(std::mt19937_64& rng, std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<int> level(0, 12);
    std::uniform_int_distribution<int> run(1, 4);
    std::bernoulli_distribution coarse(0.5);
    std::normal_distribution<double> fine(0.0, 1.0);
    const std::size_t n = len(rng);
    std::vector<double> x;
    while (x.size() < n) {
        const double v = coarse(rng) ? static_cast<double>(level(rng)) : fine(rng);
        const int r = coarse(rng) ? run(rng) : 1;
        for (int k = 0; k < r && x.size() < n; ++k) x.push_back(v);
    }
    return x;
}

inline double se(std::size_t tp, std::size_t fd) {
    return 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fd);
}
inline double pp(std::size_t tp, std::size_t md) {
    return 100.0 * static_cast<double>(tp) / static_cast<double>(tp + md);
}
inline double de(std::size_t tp, std::size_t fd, std::size_t md) {
    return 100.0 * static_cast<double>(fd + md) / static_cast<double>(tp + fd);
}

// Weight window written directly from its definition.
inline std::vector<double> window(const std::vector<double>& raw, double alpha) {
    const auto mn = std::min_element(raw.begin(), raw.end());
    const auto mx = std::max_element(raw.begin(), raw.end());
    const double h = *mx - *mn;
    const auto m = static_cast<std::size_t>(mn - raw.begin());
    std::vector<double> w(raw.size());
    for (std::size_t n = 0; n < raw.size(); ++n)
        w[n] = n <= m ? h * static_cast<double>(m - n) / static_cast<double>(m) : -alpha;
    return w;
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double sample_sd(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace oracle
