#pragma once

#include "icgb/filter.hpp"
#include "icgb/recording.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace icgb {

/// Where the weight ramp runs. StartToMin: h at the segment start down to
/// 0 at the segment minimum. MinToMax: h at the segment minimum down to 0
/// at the segment maximum. Samples off the ramp get -alpha either way.
enum class RampAnchor { StartToMin, MinToMax };

std::string_view to_string(RampAnchor r);
RampAnchor ramp_from_string(std::string_view s);

/// Every tunable of the B-point pipeline. Defaults are the published ones.
struct DetectorConfig {
    double pre_c_window_ms = 250.0;
    double c_min_distance_ms = 350.0;
    double c_threshold_std_fraction = 0.8;
    double alpha = 0.1;
    RampAnchor ramp = RampAnchor::StartToMin;
    double mb_min_peak_distance_ms = 50.0;
    double mb_threshold_divisor = 2000.0;
    /// Fallback band half-width as a fraction of the segment's peak-to-peak h.
    double epsilon_fraction = 0.05;
    /// When set, overrides epsilon_fraction with a fixed band half-width.
    std::optional<double> epsilon_absolute;

    int filter_order = 3;
    double f_low = 0.5;
    double f_high = 50.0;

    void validate() const;
    FilterSpec filter_spec(double fs) const;

    bool operator==(const DetectorConfig&) const = default;
};

/// Duration to whole samples, rounding half away from zero.
std::size_t ms_to_samples(double ms, double fs);

enum class Method { MB, Fallback, Skipped };

std::string_view to_string(Method m);
Method method_from_string(std::string_view s);

/// The stretch of filtered ICG immediately preceding a C-point.
struct Segment {
    std::size_t start_index = 0;
    std::vector<double> raw;
    std::vector<double> shifted;  // raw - min(raw)
    double h = 0.0;               // max(raw) - min(raw)
    std::size_t argmin_local = 0;
    std::size_t argmax_local = 0;
};

struct BeatDetection {
    std::size_t c_index = 0;
    std::optional<std::size_t> b_index;  // empty iff method == Skipped
    Method method = Method::Skipped;
    std::optional<std::pair<std::size_t, std::size_t>> transformed_peaks;

    bool operator==(const BeatDetection&) const = default;
};

struct MbLocation {
    std::size_t valley = 0;
    std::size_t first_peak = 0;
    std::size_t second_peak = 0;
};

/// C-points: local maxima at least c_min_distance_ms apart and at least
/// c_threshold_std_fraction sample standard deviations high.
/// Throws DataError when the signal is not longer than one min-distance span.
std::vector<std::size_t> detect_c_points(std::span<const double> filtered, double fs,
                                         const DetectorConfig& cfg);

/// Samples [c_index - W, c_index) with W = pre_c_window_ms in samples.
/// Empty when there is not enough history or the segment is flat.
std::optional<Segment> extract_segment(std::span<const double> filtered, std::size_t c_index,
                                       double fs, const DetectorConfig& cfg);

/// Linear ramp from h at the segment start down to 0 at the segment
/// minimum, then -alpha up to the end. Empty when the minimum sits on
/// the first or last sample (no ramp or no -alpha tail) or h is not positive.
/// With RampAnchor::MinToMax the ramp spans minimum to maximum instead and
/// is empty unless the maximum follows the minimum and some -alpha remains.
std::optional<std::vector<double>> build_weight_window(const Segment& seg, double alpha,
                                                       RampAnchor ramp = RampAnchor::StartToMin);

/// (shifted[n] * w[n])^2
std::vector<double> transform_segment(std::span<const double> shifted, std::span<const double> w);

/// Valley between exactly two admissible peaks of the transformed segment.
std::optional<MbLocation> locate_mb_point(std::span<const double> transformed, double fs,
                                          const DetectorConfig& cfg);

/// Latest sample of the shifted segment within [-eps, eps] of zero,
/// excluding the final sample; the segment minimum if nothing else qualifies.
std::size_t fallback_b_point(const Segment& seg, const DetectorConfig& cfg);

/// Intermediate signals of one beat, for plotting and diagnostics.
struct BeatTrace {
    std::optional<Segment> segment;
    std::vector<double> weights;
    std::vector<double> transformed;
    BeatDetection detection;
};

BeatTrace trace_beat(std::span<const double> filtered, std::size_t c_index, double fs,
                     const DetectorConfig& cfg);

BeatDetection delineate_beat(std::span<const double> filtered, std::size_t c_index, double fs,
                             const DetectorConfig& cfg);

/// C- and B-point detection on an already band-passed signal.
std::vector<BeatDetection> delineate(std::span<const double> filtered, double fs,
                                     const DetectorConfig& cfg);

/// Band-pass filter, then C-points, then one B-point per C-point.
std::vector<BeatDetection> detect_b_points(const Recording& rec, const DetectorConfig& cfg);

std::vector<double> bandpass(const Recording& rec, const DetectorConfig& cfg);

std::size_t count_method(std::span<const BeatDetection> beats, Method m);

}  // namespace icgb
