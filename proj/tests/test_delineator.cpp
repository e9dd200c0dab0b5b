#include <doctest.h>

#include "icgb/delineator.hpp"
#include "icgb/error.hpp"
#include "icgb/testkit.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace icgb;

namespace {

// Segment of exactly `raw` by placing it before a C sample at fs 1 kHz.
Segment make_segment(const std::vector<double>& raw) {
    DetectorConfig cfg;
    cfg.pre_c_window_ms = static_cast<double>(raw.size());
    std::vector<double> sig(raw);
    sig.push_back(100.0);
    auto seg = extract_segment(sig, raw.size(), 1000.0, cfg);
    REQUIRE(seg.has_value());
    return *seg;
}

std::vector<double> gauss_sum(std::size_t n, std::initializer_list<double> centres, double sigma) {
    std::vector<double> t(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (double c : centres) {
            const double u = (static_cast<double>(i) - c) / sigma;
            t[i] += std::exp(-0.5 * u * u);
        }
    return t;
}

// 500-sample pre-C segment whose weighted transform has one hump on the
// ramp and one between the minimum (sample 210) and the C upstroke.
std::vector<double> two_hump_signal() {
    constexpr double pi = std::numbers::pi;
    std::vector<double> x(500);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double n = static_cast<double>(i);
        if (i <= 210)
            x[i] = 0.2 + 0.3 * std::sin(pi * n / 210.0) - 0.2 * n / 210.0;
        else if (i <= 380)
            x[i] = 0.05 * (n - 210.0) / 170.0 + 0.25 * std::sin(pi * (n - 210.0) / 170.0);
        else
            x[i] = 0.05 + 1.5 * ((n - 380.0) / 120.0) * ((n - 380.0) / 120.0);
    }
    for (const double v : {2.0, 1.0, 0.5}) x.push_back(v);
    return x;
}

}  // namespace

TEST_CASE("millisecond conversion rounds half away from zero") {
    CHECK(ms_to_samples(350.0, 2000.0) == 700);
    CHECK(ms_to_samples(250.0, 2000.0) == 500);
    CHECK(ms_to_samples(50.0, 2000.0) == 100);
    CHECK(ms_to_samples(2.5, 1000.0) == 3);
    CHECK(ms_to_samples(1.5, 1000.0) == 2);
    CHECK(ms_to_samples(0.4, 1000.0) == 0);
    CHECK(60.0 / 0.35 == doctest::Approx(171.4).epsilon(1e-3));
}

TEST_CASE("config defaults and validation") {
    const DetectorConfig d;
    CHECK(d.pre_c_window_ms == 250.0);
    CHECK(d.c_min_distance_ms == 350.0);
    CHECK(d.c_threshold_std_fraction == 0.8);
    CHECK(d.alpha == 0.1);
    CHECK(d.mb_min_peak_distance_ms == 50.0);
    CHECK(d.mb_threshold_divisor == 2000.0);
    CHECK(d.f_low == 0.5);
    CHECK(d.f_high == 50.0);
    CHECK(d.filter_order == 3);
    CHECK_NOTHROW(d.validate());
    DetectorConfig bad;
    bad.alpha = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = DetectorConfig{};
    bad.epsilon_absolute = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("method names round-trip") {
    for (Method m : {Method::MB, Method::Fallback, Method::Skipped}) CHECK(method_from_string(to_string(m)) == m);
    CHECK_THROWS_AS(method_from_string("mb"), DataError);
}

TEST_CASE("segment extraction") {
    const DetectorConfig cfg;
    std::vector<double> sig(6000);
    for (std::size_t i = 0; i < sig.size(); ++i) sig[i] = std::sin(0.01 * static_cast<double>(i));
    const auto seg = extract_segment(sig, 5000, 2000.0, cfg);
    REQUIRE(seg);
    CHECK(seg->start_index == 4500);
    CHECK(seg->raw.size() == 500);
    CHECK(seg->raw.front() == sig[4500]);
    CHECK(seg->raw.back() == sig[4999]);
    CHECK(*std::min_element(seg->shifted.begin(), seg->shifted.end()) == 0.0);
    CHECK(*std::max_element(seg->shifted.begin(), seg->shifted.end()) == doctest::Approx(seg->h));

    CHECK_FALSE(extract_segment(sig, 300, 2000.0, cfg));
    CHECK(extract_segment(sig, 500, 2000.0, cfg));
    const std::vector<double> flat(2000, 0.25);
    CHECK_FALSE(extract_segment(flat, 1000, 2000.0, cfg));
    CHECK_THROWS_AS(extract_segment(sig, 7000, 2000.0, cfg), DataError);
}

TEST_CASE("extrema ties resolve to the first occurrence") {
    const auto seg = make_segment({2, 0, 5, 0, 5, 1});
    CHECK(seg.argmin_local == 1);
    CHECK(seg.argmax_local == 2);
}

TEST_CASE("weight window worked example") {
    const auto seg = make_segment({3, 1, 0, 2, 5});
    CHECK(seg.h == 5.0);
    CHECK(seg.argmin_local == 2);
    const auto w = build_weight_window(seg, 0.1);
    REQUIRE(w);
    const std::vector<double> want{5.0, 2.5, 0.0, -0.1, -0.1};
    REQUIRE(w->size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) CHECK((*w)[i] == doctest::Approx(want[i]).epsilon(1e-15));
    CHECK(*std::max_element(w->begin(), w->end()) - *std::min_element(w->begin(), w->end()) ==
          doctest::Approx(5.1));
}

TEST_CASE("min-to-max ramp") {
    const auto seg = make_segment({3, 1, 0, 2, 5});
    const auto w = build_weight_window(seg, 0.1, RampAnchor::MinToMax);
    REQUIRE(w);
    const std::vector<double> want{-0.1, -0.1, 5.0, 2.5, 0.0};
    for (std::size_t i = 0; i < want.size(); ++i) CHECK((*w)[i] == doctest::Approx(want[i]).epsilon(1e-15));
    CHECK_FALSE(build_weight_window(make_segment({5, 2, 0, 1}), 0.1, RampAnchor::MinToMax));
    CHECK(ramp_from_string(to_string(RampAnchor::MinToMax)) == RampAnchor::MinToMax);
    CHECK_THROWS_AS(ramp_from_string("sideways"), ConfigError);
}

TEST_CASE("weight window degenerates when the minimum leads or trails") {
    CHECK_FALSE(build_weight_window(make_segment({0, 1, 2, 3}), 0.1));
    CHECK_FALSE(build_weight_window(make_segment({3, 2, 1, 0}), 0.1));
    CHECK_FALSE(build_weight_window(make_segment({0, 1, 2, 3}), 0.1, RampAnchor::MinToMax));
}

TEST_CASE("window peak-to-peak equals h + alpha") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(0.0, 2.0);
    std::uniform_int_distribution<std::size_t> len(3, 600);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> raw(len(rng));
        for (double& v : raw) v = n(rng);
        const auto seg = make_segment(raw);
        for (double alpha : {0.01, 0.1, 1.0}) {
            const auto w = build_weight_window(seg, alpha);
            if (!w) {
                CHECK((seg.argmin_local == 0 || seg.argmin_local + 1 == raw.size()));
                continue;
            }
            const double p2p = *std::max_element(w->begin(), w->end()) - *std::min_element(w->begin(), w->end());
            CHECK(p2p == doctest::Approx(seg.h + alpha).epsilon(1e-12));
            const auto ref = oracle::window(raw, alpha);
            for (std::size_t i = 0; i < ref.size(); ++i) CHECK((*w)[i] == doctest::Approx(ref[i]).epsilon(1e-12));
            ++checked;
        }
    }
    CHECK(checked > 800);
}

TEST_CASE("transform worked examples") {
    const auto t = transform_segment(std::vector<double>{3, 1, 0, 2, 5}, std::vector<double>{5, 2.5, 0, -0.1, -0.1});
    const std::vector<double> want{225.0, 6.25, 0.0, 0.04, 0.25};
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(t[i] == doctest::Approx(want[i]).epsilon(1e-12));
    const auto z = transform_segment(std::vector<double>{1, 2, 3}, std::vector<double>{0, 0, 0});
    CHECK(z == std::vector<double>{0, 0, 0});
    CHECK_THROWS_AS(transform_segment(std::vector<double>{1, 2}, std::vector<double>{1}), DataError);

    const std::vector<double> s{0.3, 1.2, 0.0, 0.7}, w{2.0, 1.0, 0.0, -0.1};
    std::vector<double> s3(s);
    for (double& v : s3) v *= 3.0;
    const auto t1 = transform_segment(s, w), t3 = transform_segment(s3, w);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(t3[i] == doctest::Approx(9.0 * t1[i]));
}

TEST_CASE("MB point needs exactly two peaks") {
    const DetectorConfig cfg;
    auto t = gauss_sum(500, {40.0, 460.0}, 15.0);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double d = static_cast<double>(i) - 210.0;
        t[i] += 1e-7 * d * d / 1e4;
    }
    const auto mb = locate_mb_point(t, 2000.0, cfg);
    REQUIRE(mb);
    CHECK(mb->valley == 210);
    CHECK(mb->first_peak < 210);
    CHECK(mb->second_peak > 210);

    CHECK_FALSE(locate_mb_point(gauss_sum(500, {250.0}, 40.0), 2000.0, cfg));
    CHECK_FALSE(locate_mb_point(gauss_sum(500, {60.0, 250.0, 440.0}, 25.0), 2000.0, cfg));
    CHECK_FALSE(locate_mb_point(std::vector<double>(500, 0.0), 2000.0, cfg));
}

TEST_CASE("MB valley ties go to the earlier index") {
    const DetectorConfig cfg;
    std::vector<double> t(400, 1.0);
    t[50] = 5.0;
    t[350] = 5.0;
    std::fill(t.begin() + 150, t.begin() + 251, 0.5);
    const auto mb = locate_mb_point(t, 2000.0, cfg);
    REQUIRE(mb);
    CHECK(mb->valley == 150);
}

TEST_CASE("fallback rule") {
    DetectorConfig cfg;
    {
        // shifted = [0.5, 0, 0.01, 0.8, 2.0], h = 2, eps = 0.1
        const auto seg = make_segment({1.5, 1.0, 1.01, 1.8, 3.0});
        CHECK(fallback_b_point(seg, cfg) == 2);
    }
    {
        const auto seg = make_segment({4, 3, 0, 2, 5, 6});
        CHECK(fallback_b_point(seg, cfg) == seg.argmin_local);
    }
    {
        // Every sample qualifies; the final sample is excluded.
        cfg.epsilon_absolute = 100.0;
        const auto seg = make_segment({4, 3, 0, 2, 5, 6});
        CHECK(fallback_b_point(seg, cfg) == 4);
    }
    {
        cfg.epsilon_absolute = 0.5;
        const auto seg = make_segment({4, 0.3, 0, 2, 5, 6});
        CHECK(fallback_b_point(seg, cfg) == 2);
    }
}

TEST_CASE("C-points on a constant or short signal") {
    const DetectorConfig cfg;
    CHECK(detect_c_points(std::vector<double>(5000, 0.0), 2000.0, cfg).empty());
    CHECK_THROWS_AS(detect_c_points(std::vector<double>(700, 0.0), 2000.0, cfg), DataError);
}

TEST_CASE("two-hump beat takes the MB branch") {
    const auto sig = two_hump_signal();
    const auto tr = trace_beat(sig, 500, 2000.0, DetectorConfig{});
    REQUIRE(tr.segment);
    CHECK(tr.segment->argmin_local == 210);
    CHECK(tr.detection.method == Method::MB);
    REQUIRE(tr.detection.b_index);
    CHECK(*tr.detection.b_index == 210);
    REQUIRE(tr.detection.transformed_peaks);
    CHECK(tr.detection.transformed_peaks->first < 210);
    CHECK(tr.detection.transformed_peaks->second > 210);
    CHECK(tr.weights.size() == 500);
    CHECK(tr.transformed.size() == 500);
}

TEST_CASE("single-hump beat falls back") {
    auto sig = two_hump_signal();
    for (std::size_t i = 211; i <= 380; ++i) sig[i] = 0.05 * static_cast<double>(i - 210) / 170.0;
    const auto b = delineate_beat(sig, 500, 2000.0, DetectorConfig{});
    CHECK(b.method == Method::Fallback);
    CHECK_FALSE(b.transformed_peaks);
    REQUIRE(b.b_index);
    CHECK(*b.b_index < 500);
}

TEST_CASE("skipped beats carry no B-point") {
    std::vector<double> sig(1000, 0.0);
    sig[100] = 1.0;
    const auto b = delineate_beat(sig, 100, 2000.0, DetectorConfig{});
    CHECK(b.method == Method::Skipped);
    CHECK_FALSE(b.b_index);
}

TEST_CASE("pipeline on clean synthetic beats") {
    SynthSpec spec;
    spec.n_beats = 60;
    const auto syn = synthesize_icg(spec);
    const DetectorConfig cfg;
    const auto filtered = bandpass(syn.recording, cfg);
    const auto cs = detect_c_points(filtered, spec.fs, cfg);
    const auto& truth_c = *syn.truth.c_points;
    REQUIRE(cs.size() == truth_c.size());
    for (std::size_t k = 0; k < cs.size(); ++k)
        CHECK(std::abs(static_cast<double>(cs[k]) - static_cast<double>(truth_c[k])) <= 20.0);

    const auto beats = detect_b_points(syn.recording, cfg);
    REQUIRE(beats.size() == cs.size());
    const std::size_t w = ms_to_samples(cfg.pre_c_window_ms, spec.fs);
    for (std::size_t k = 0; k < beats.size(); ++k) {
        const auto& b = beats[k];
        CHECK(b.c_index == cs[k]);
        REQUIRE(b.method != Method::Skipped);
        REQUIRE(b.b_index);
        CHECK(*b.b_index < b.c_index);
        CHECK(*b.b_index >= b.c_index - w);
        CHECK(std::abs(static_cast<double>(*b.b_index) - static_cast<double>(syn.truth.b_points[k])) <= 60.0);
    }
    CHECK(count_method(beats, Method::MB) + count_method(beats, Method::Fallback) == beats.size());
}

TEST_CASE("C-points, segments and fallback follow amplitude scale") {
    SynthSpec spec;
    spec.n_beats = 20;
    spec.noise_rms = 0.03;
    spec.rr_jitter_pct = 8.0;
    spec.seed = 11;
    const auto syn = synthesize_icg(spec);
    const DetectorConfig cfg;
    const auto f = bandpass(syn.recording, cfg);
    const auto cs = detect_c_points(f, spec.fs, cfg);
    for (double c : {0.5, 2.0, 10.0}) {
        std::vector<double> fc(f);
        for (double& v : fc) v *= c;
        REQUIRE(detect_c_points(fc, spec.fs, cfg) == cs);
        for (std::size_t ci : cs) {
            const auto s0 = extract_segment(f, ci, spec.fs, cfg), s1 = extract_segment(fc, ci, spec.fs, cfg);
            if (!s0) {
                CHECK_FALSE(s1);
                continue;
            }
            REQUIRE(s1);
            CHECK(s1->argmin_local == s0->argmin_local);
            CHECK(s1->h == doctest::Approx(c * s0->h));
            CHECK(fallback_b_point(*s1, cfg) == fallback_b_point(*s0, cfg));
        }
    }
}

TEST_CASE("ramp energy scales by c^4 and the -alpha tail by c^2") {
    const std::vector<double> raw{4, 3, 0, 2, 5, 6};
    const auto s0 = make_segment(raw);
    std::vector<double> raw2(raw);
    for (double& v : raw2) v *= 2.0;
    const auto s1 = make_segment(raw2);
    const auto t0 = transform_segment(s0.shifted, *build_weight_window(s0, 0.1));
    const auto t1 = transform_segment(s1.shifted, *build_weight_window(s1, 0.1));
    for (std::size_t n = 0; n < raw.size(); ++n) {
        const double k = n <= s0.argmin_local ? 16.0 : 4.0;
        CHECK(t1[n] == doctest::Approx(k * t0[n]));
    }
}

TEST_CASE("detection is deterministic") {
    SynthSpec spec;
    spec.noise_rms = 0.05;
    spec.seed = 3;
    const auto syn = synthesize_icg(spec);
    CHECK(detect_b_points(syn.recording, DetectorConfig{}) == detect_b_points(syn.recording, DetectorConfig{}));
}
