#include "icgb/testkit.hpp"

#include "icgb/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace icgb {

namespace {

// Highest rate the default 350 ms C-point spacing can resolve.
constexpr double kMaxHeartRateBpm = 60000.0 / 350.0;

double bump(double t_ms, double centre_ms, double sigma_ms) {
    const double u = (t_ms - centre_ms) / sigma_ms;
    return std::exp(-0.5 * u * u);
}

}  // namespace

void SynthSpec::validate() const {
    if (!(fs > 0.0) || !std::isfinite(fs)) throw ConfigError("fs must be positive");
    if (n_beats == 0) throw ConfigError("n_beats must be >= 1");
    if (!(heart_rate_bpm > 0.0) || !(heart_rate_bpm < kMaxHeartRateBpm))
        throw ConfigError("heart rate must be in (0, 171.4) bpm");
    if (!(b_to_c_ms > 0.0) || !(b_to_c_ms < 250.0)) throw ConfigError("b_to_c_ms must be in (0, 250)");
    if (!(notch_depth > 0.0) || !(notch_depth < 1.0)) throw ConfigError("notch_depth must be in (0, 1)");
    if (!(c_amplitude > 0.0)) throw ConfigError("c_amplitude must be positive");
    if (!(noise_rms >= 0.0)) throw ConfigError("noise_rms must be >= 0");
    if (!(rr_jitter_pct >= 0.0) || !(rr_jitter_pct < 50.0))
        throw ConfigError("rr_jitter_pct must be in [0, 50)");
    const double shortest_rr_ms = 60000.0 / heart_rate_bpm * (1.0 - rr_jitter_pct / 100.0);
    if (!(shortest_rr_ms > 350.0))
        throw ConfigError("jittered beat interval drops below 350 ms");
}

SynthOutput synthesize_icg(const SynthSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    const double rr_ms = 60000.0 / spec.heart_rate_bpm;
    const double ms_per_sample = 1000.0 / spec.fs;
    const auto b_offset = static_cast<std::size_t>(std::llround(spec.b_to_c_ms * spec.fs / 1000.0));

    std::vector<std::size_t> cs;
    double t_ms = rr_ms / 2.0;
    for (std::size_t k = 0; k < spec.n_beats; ++k) {
        cs.push_back(static_cast<std::size_t>(std::llround(t_ms / ms_per_sample)));
        t_ms += rr_ms * (1.0 + spec.rr_jitter_pct / 100.0 * unit(rng));
    }
    const double end_ms = static_cast<double>(cs.back()) * ms_per_sample + rr_ms / 2.0;
    const auto n = static_cast<std::size_t>(std::llround(end_ms / ms_per_sample));

    // Morphology in ms relative to the C peak; post-C waves follow the beat rate.
    const double rate_scale = rr_ms / 833.0;
    const double sigma_rise = spec.b_to_c_ms / 3.0;
    const double sigma_fall = 45.0;
    const double sigma_notch = spec.b_to_c_ms / 5.0;
    const double a_centre = -(spec.b_to_c_ms + 90.0);
    const double x_centre = 0.2 * rr_ms, x_sigma = 30.0 * rate_scale;
    const double o_centre = 0.36 * rr_ms, o_sigma = 35.0 * rate_scale;
    const double span_ms = std::max(600.0, o_centre + 6.0 * o_sigma);
    const double amp = spec.c_amplitude;

    std::vector<double> x(n, 0.0);
    for (std::size_t c : cs) {
        const auto reach = static_cast<std::ptrdiff_t>(std::ceil(span_ms / ms_per_sample));
        const auto lo = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(c) - reach);
        const auto hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(n),
                                                 static_cast<std::ptrdiff_t>(c) + reach);
        for (std::ptrdiff_t i = lo; i < hi; ++i) {
            const double t = static_cast<double>(i - static_cast<std::ptrdiff_t>(c)) * ms_per_sample;
            double v = bump(t, 0.0, t < 0.0 ? sigma_rise : sigma_fall);
            v -= spec.notch_depth * bump(t, -spec.b_to_c_ms, sigma_notch);
            v += 0.12 * bump(t, a_centre, 25.0);
            v -= 0.35 * bump(t, x_centre, x_sigma);
            v += 0.08 * bump(t, o_centre, o_sigma);
            x[static_cast<std::size_t>(i)] += amp * v;
        }
    }
    if (spec.noise_rms > 0.0) {
        std::normal_distribution<double> noise(0.0, spec.noise_rms);
        for (double& v : x) v += noise(rng);
    }

    SynthOutput out;
    out.recording.id = spec.id;
    out.recording.fs = spec.fs;
    out.recording.samples = std::move(x);
    out.truth.recording_id = spec.id;
    out.truth.annotator = "testkit";
    out.truth.c_points = cs;
    out.truth.b_points.reserve(cs.size());
    for (std::size_t c : cs) out.truth.b_points.push_back(c - b_offset);
    return out;
}

}  // namespace icgb
