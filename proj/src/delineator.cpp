#include "icgb/delineator.hpp"

#include "icgb/error.hpp"
#include "icgb/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace icgb {

namespace {

double sample_std(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be > 0");
}

}  // namespace

void DetectorConfig::validate() const {
    require_positive(pre_c_window_ms, "pre_c_window_ms");
    require_positive(c_min_distance_ms, "c_min_distance_ms");
    require_positive(c_threshold_std_fraction, "c_threshold_std_fraction");
    require_positive(alpha, "alpha");
    require_positive(mb_min_peak_distance_ms, "mb_min_peak_distance_ms");
    require_positive(mb_threshold_divisor, "mb_threshold_divisor");
    require_positive(epsilon_fraction, "epsilon_fraction");
    if (epsilon_absolute) require_positive(*epsilon_absolute, "epsilon_absolute");
    if (filter_order < 1) throw ConfigError("filter_order must be >= 1");
    if (!(f_low > 0.0) || !(f_low < f_high)) throw ConfigError("need 0 < f_low < f_high");
}

FilterSpec DetectorConfig::filter_spec(double fs) const {
    return FilterSpec{filter_order, f_low, f_high, fs};
}

std::size_t ms_to_samples(double ms, double fs) {
    const double v = std::round(ms * fs / 1000.0);
    return v > 0.0 ? static_cast<std::size_t>(v) : 0;
}

std::string_view to_string(Method m) {
    switch (m) {
        case Method::MB: return "MB";
        case Method::Fallback: return "Fallback";
        case Method::Skipped: return "Skipped";
    }
    return "Skipped";
}

Method method_from_string(std::string_view s) {
    if (s == "MB") return Method::MB;
    if (s == "Fallback") return Method::Fallback;
    if (s == "Skipped") return Method::Skipped;
    throw DataError("unknown detection method '" + std::string(s) + "'");
}

std::string_view to_string(RampAnchor r) {
    return r == RampAnchor::MinToMax ? "min-to-max" : "start-to-min";
}

RampAnchor ramp_from_string(std::string_view s) {
    if (s == "start-to-min") return RampAnchor::StartToMin;
    if (s == "min-to-max") return RampAnchor::MinToMax;
    throw ConfigError("unknown ramp '" + std::string(s) + "' (start-to-min or min-to-max)");
}

std::vector<std::size_t> detect_c_points(std::span<const double> filtered, double fs,
                                         const DetectorConfig& cfg) {
    const std::size_t dist = ms_to_samples(cfg.c_min_distance_ms, fs);
    if (filtered.size() <= dist)
        throw DataError("recording shorter than one C-point min-distance window (" +
                        std::to_string(filtered.size()) + " <= " + std::to_string(dist) +
                        " samples)");
    PeakConstraints pc;
    pc.min_distance = dist;
    pc.min_height = cfg.c_threshold_std_fraction * sample_std(filtered);
    return find_peaks(filtered, pc);
}

std::optional<Segment> extract_segment(std::span<const double> filtered, std::size_t c_index,
                                       double fs, const DetectorConfig& cfg) {
    if (c_index > filtered.size())
        throw DataError("C-point index " + std::to_string(c_index) + " outside signal");
    const std::size_t w = ms_to_samples(cfg.pre_c_window_ms, fs);
    if (w == 0 || c_index < w) return std::nullopt;

    Segment seg;
    seg.start_index = c_index - w;
    seg.raw.assign(filtered.begin() + static_cast<std::ptrdiff_t>(seg.start_index),
                   filtered.begin() + static_cast<std::ptrdiff_t>(c_index));
    const auto lo = std::min_element(seg.raw.begin(), seg.raw.end());
    const auto hi = std::max_element(seg.raw.begin(), seg.raw.end());
    seg.argmin_local = static_cast<std::size_t>(lo - seg.raw.begin());
    seg.argmax_local = static_cast<std::size_t>(hi - seg.raw.begin());
    const double mn = *lo;
    seg.h = *hi - mn;
    if (!(seg.h > 0.0)) return std::nullopt;
    seg.shifted.resize(seg.raw.size());
    std::transform(seg.raw.begin(), seg.raw.end(), seg.shifted.begin(),
                   [mn](double v) { return v - mn; });
    return seg;
}

std::optional<std::vector<double>> build_weight_window(const Segment& seg, double alpha,
                                                       RampAnchor ramp) {
    const std::size_t start = ramp == RampAnchor::StartToMin ? 0 : seg.argmin_local;
    const std::size_t stop = ramp == RampAnchor::StartToMin ? seg.argmin_local : seg.argmax_local;
    const std::size_t len = seg.shifted.size();
    if (stop <= start || !(seg.h > 0.0) || stop >= len) return std::nullopt;
    if (start == 0 && stop + 1 == len) return std::nullopt;
    std::vector<double> w(seg.shifted.size(), -alpha);
    const double span = static_cast<double>(stop - start);
    for (std::size_t n = start; n <= stop; ++n)
        w[n] = seg.h * (static_cast<double>(stop - n) / span);
    return w;
}

std::vector<double> transform_segment(std::span<const double> shifted, std::span<const double> w) {
    if (shifted.size() != w.size()) throw DataError("segment and window lengths differ");
    std::vector<double> t(shifted.size());
    for (std::size_t n = 0; n < t.size(); ++n) {
        const double v = shifted[n] * w[n];
        t[n] = v * v;
    }
    return t;
}

std::optional<MbLocation> locate_mb_point(std::span<const double> transformed, double fs,
                                          const DetectorConfig& cfg) {
    if (transformed.empty()) return std::nullopt;
    const double top = *std::max_element(transformed.begin(), transformed.end());
    PeakConstraints pc;
    pc.min_distance = ms_to_samples(cfg.mb_min_peak_distance_ms, fs);
    pc.min_height = top / cfg.mb_threshold_divisor;
    const auto peaks = find_peaks(transformed, pc);
    if (peaks.size() != 2) return std::nullopt;

    const std::size_t p1 = peaks[0], p2 = peaks[1];
    if (p2 - p1 < 2) return std::nullopt;
    const auto it = std::min_element(transformed.begin() + static_cast<std::ptrdiff_t>(p1 + 1),
                                     transformed.begin() + static_cast<std::ptrdiff_t>(p2));
    return MbLocation{static_cast<std::size_t>(it - transformed.begin()), p1, p2};
}

std::size_t fallback_b_point(const Segment& seg, const DetectorConfig& cfg) {
    const double eps = cfg.epsilon_absolute.value_or(cfg.epsilon_fraction * seg.h);
    const std::size_t n = seg.shifted.size();
    for (std::size_t i = n >= 1 ? n - 1 : 0; i-- > 0;)
        if (std::abs(seg.shifted[i]) <= eps) return i;
    return seg.argmin_local;
}

BeatTrace trace_beat(std::span<const double> filtered, std::size_t c_index, double fs,
                     const DetectorConfig& cfg) {
    BeatTrace tr;
    tr.detection.c_index = c_index;
    tr.segment = extract_segment(filtered, c_index, fs, cfg);
    if (!tr.segment) {
        tr.detection.method = Method::Skipped;
        return tr;
    }
    const Segment& seg = *tr.segment;

    if (auto w = build_weight_window(seg, cfg.alpha, cfg.ramp)) {
        tr.weights = std::move(*w);
        tr.transformed = transform_segment(seg.shifted, tr.weights);
        if (auto mb = locate_mb_point(tr.transformed, fs, cfg)) {
            tr.detection.method = Method::MB;
            tr.detection.b_index = seg.start_index + mb->valley;
            tr.detection.transformed_peaks = std::make_pair(mb->first_peak, mb->second_peak);
            return tr;
        }
    }
    tr.detection.method = Method::Fallback;
    tr.detection.b_index = seg.start_index + fallback_b_point(seg, cfg);
    return tr;
}

BeatDetection delineate_beat(std::span<const double> filtered, std::size_t c_index, double fs,
                             const DetectorConfig& cfg) {
    return trace_beat(filtered, c_index, fs, cfg).detection;
}

std::vector<BeatDetection> delineate(std::span<const double> filtered, double fs,
                                     const DetectorConfig& cfg) {
    cfg.validate();
    const auto cs = detect_c_points(filtered, fs, cfg);
    std::vector<BeatDetection> out;
    out.reserve(cs.size());
    for (std::size_t c : cs) out.push_back(delineate_beat(filtered, c, fs, cfg));
    return out;
}

std::vector<double> bandpass(const Recording& rec, const DetectorConfig& cfg) {
    if (rec.samples.empty()) throw DataError("recording '" + rec.id + "' has no samples");
    const auto coeffs = design_bandpass(cfg.filter_spec(rec.fs));
    return filtfilt(coeffs, rec.samples);
}

std::vector<BeatDetection> detect_b_points(const Recording& rec, const DetectorConfig& cfg) {
    cfg.validate();
    const auto filtered = bandpass(rec, cfg);
    return delineate(filtered, rec.fs, cfg);
}

std::size_t count_method(std::span<const BeatDetection> beats, Method m) {
    return static_cast<std::size_t>(
        std::count_if(beats.begin(), beats.end(), [m](const BeatDetection& b) { return b.method == m; }));
}

}  // namespace icgb
