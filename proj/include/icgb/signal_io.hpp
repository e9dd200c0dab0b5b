#pragma once

#include "icgb/delineator.hpp"
#include "icgb/recording.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace icgb {

/// Recording text file:
///
///     # fs=2000 unit=Ohm/s id=IDN1
///     0.0125
///     0.0131
///     ...
///
/// One decimal amplitude per line. Blank lines and further `#` lines are
/// ignored. `fs_override` wins over the header; without either, loading fails.
Recording load_recording(const std::filesystem::path& path,
                         std::optional<double> fs_override = std::nullopt);
Recording parse_recording(const std::string& text, std::optional<double> fs_override = std::nullopt);
void save_recording(const Recording& rec, const std::filesystem::path& path);

struct LoadedAnnotations {
    AnnotationSet set;
    std::size_t duplicates_collapsed = 0;
};

/// JSON annotation file with `recording_id`, `annotator`, `b_points`, and
/// optionally `c_points` and `created_at`. Adjacent duplicate indices are
/// collapsed and counted; any other ordering violation is an error.
LoadedAnnotations load_annotations(const std::filesystem::path& path);
LoadedAnnotations parse_annotations(const std::string& text);
void save_annotations(const AnnotationSet& ann, const std::filesystem::path& path);

struct DetectionFile {
    std::string recording_id;
    double fs = 0.0;
    std::vector<BeatDetection> beats;
    DetectorConfig config;

    bool operator==(const DetectionFile&) const = default;
};

DetectionFile load_detections(const std::filesystem::path& path);
void save_detections(const DetectionFile& det, const std::filesystem::path& path);
std::string serialize_detections(const DetectionFile& det);

/// One annotator view: samples[start_index, start_index + samples.size()).
struct SegmentRecord {
    std::size_t start_index = 0;
    std::vector<double> samples;
    bool clipped = false;
};

/// Windows [c - pre_s, c + post_s) around every C-point, clipped to the
/// recording; clipped windows are flagged.
std::vector<SegmentRecord> cut_segments(const Recording& rec, std::span<const std::size_t> c_points,
                                        double pre_s, double post_s);

/// Writes the annotator's segment queue. The payload carries only the
/// waveform windows, never detector output. Returns the segment count.
std::size_t export_segments(const Recording& rec, std::span<const std::size_t> c_points,
                            double pre_s, double post_s, const std::filesystem::path& path);

/// Writes via a sibling temporary file and renames on success.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

/// Current UTC time as ISO 8601.
std::string utc_timestamp();

}  // namespace icgb
