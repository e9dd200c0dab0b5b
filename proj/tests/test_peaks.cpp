#include <doctest.h>

#include "icgb/peaks.hpp"
#include "oracles.hpp"

#include <limits>
#include <random>
#include <vector>

using namespace icgb;

namespace {

std::vector<std::size_t> peaks(const std::vector<double>& x, std::size_t dist, double height) {
    return find_peaks(x, PeakConstraints{dist, height, std::nullopt});
}

}  // namespace

TEST_CASE("worked examples") {
    const std::vector<double> x{0, 1, 0, 2, 0};
    CHECK(peaks(x, 1, 0.5) == std::vector<std::size_t>{1, 3});
    CHECK(peaks(x, 3, 0.5) == std::vector<std::size_t>{3});
    CHECK(peaks({0, 0.2, 0, 0.3, 0}, 0, 0.5).empty());
}

TEST_CASE("edge cases") {
    CHECK(peaks({}, 0, 0.0).empty());
    CHECK(peaks({1.0}, 0, 0.0).empty());
    CHECK(peaks({5, 1, 5}, 0, 0.0).empty());
    CHECK(peaks({0, 2, 2, 2, 1}, 0, 0.0) == std::vector<std::size_t>{1});
    CHECK(peaks({0, 2, 2, 3, 1}, 0, 0.0) == std::vector<std::size_t>{3});
    CHECK(peaks({0, 2, 2, 2}, 0, 0.0).empty());
    CHECK(peaks({0, 1, 0, 1, 0}, 5, 0.0) == std::vector<std::size_t>{1});
    CHECK(peaks(std::vector<double>(50, 0.0), 0, -1.0).empty());
}

TEST_CASE("max_count keeps the tallest") {
    const std::vector<double> x{0, 3, 0, 1, 0, 2, 0};
    CHECK(find_peaks(x, PeakConstraints{0, 0.0, 2}) == std::vector<std::size_t>{1, 5});
    CHECK(find_peaks(x, PeakConstraints{0, 0.0, 0}).empty());
}

TEST_CASE("agrees with the brute-force oracle") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> dist(0, 40);
    std::uniform_real_distribution<double> height(-2.0, 8.0);
    std::bernoulli_distribution capped(0.2);
    std::uniform_int_distribution<std::size_t> cap(0, 6);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto x = oracle::random_sequence(rng, 500);
        const std::size_t d = dist(rng);
        const double hmin = trial % 5 == 0 ? -std::numeric_limits<double>::infinity() : height(rng);
        const std::optional<std::size_t> mc = capped(rng) ? std::optional(cap(rng)) : std::nullopt;
        const auto got = find_peaks(x, PeakConstraints{d, hmin, mc});
        REQUIRE(got == oracle::peaks(x, d, hmin, mc));
    }
}

TEST_CASE("distance, height and translation properties") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> dist(1, 60);
    std::uniform_real_distribution<double> height(-1.0, 6.0);
    for (int trial = 0; trial < 500; ++trial) {
        const auto x = oracle::random_sequence(rng, 400);
        const std::size_t d = dist(rng);
        const double hmin = height(rng);
        const auto got = peaks(x, d, hmin);
        for (std::size_t k = 0; k < got.size(); ++k) {
            CHECK(x[got[k]] >= hmin);
            if (k > 0) CHECK(got[k] - got[k - 1] >= d);
        }
        // Integer shift keeps every comparison exact.
        std::vector<double> shifted(x);
        for (double& v : shifted) v += 16.0;
        CHECK(peaks(shifted, d, hmin + 16.0) == got);
    }
}
