#pragma once

#include "icgb/recording.hpp"

#include <cstddef>
#include <cstdint>
#include <string>

namespace icgb {

/// Parameters of a synthetic ICG recording with known B/C locations.
struct SynthSpec {
    double fs = 2000.0;
    std::size_t n_beats = 60;
    double heart_rate_bpm = 72.0;
    /// Distance from the B notch to the C peak.
    double b_to_c_ms = 60.0;
    /// Notch depth as a fraction of the C amplitude.
    double notch_depth = 0.15;
    double c_amplitude = 1.0;
    /// Additive white Gaussian noise, standard deviation in signal units.
    double noise_rms = 0.0;
    /// Uniform beat-interval jitter, percent of the nominal interval.
    double rr_jitter_pct = 0.0;
    std::uint64_t seed = 1;
    std::string id = "synthetic";

    void validate() const;
};

struct SynthOutput {
    Recording recording;
    AnnotationSet truth;  // exact B and C sample indices
};

/// Sum-of-bumps ICG: per beat an A wave, a B notch b_to_c_ms before a
/// dominant asymmetric C peak, then X trough and O wave. Deterministic
/// for a given SynthSpec (including seed).
SynthOutput synthesize_icg(const SynthSpec& spec);

}  // namespace icgb
