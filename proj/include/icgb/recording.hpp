#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace icgb {

/// Single-channel, uniformly sampled ICG (dZ/dt) recording.
struct Recording {
    std::string id;
    double fs = 0.0;
    std::vector<double> samples;
    std::string unit = "Ohm/s";

    double duration_s() const { return fs > 0.0 ? static_cast<double>(samples.size()) / fs : 0.0; }
};

/// Manually labelled fiducial points of one recording, one B-point per beat.
struct AnnotationSet {
    std::string recording_id;
    std::vector<std::size_t> b_points;
    std::optional<std::vector<std::size_t>> c_points;
    std::string annotator;
    std::string created_at;

    /// Throws DataError unless both lists are strictly ascending, pair one
    /// to one, and (when `n_samples` is given) lie inside the recording.
    void validate(std::optional<std::size_t> n_samples = std::nullopt) const;
};

}  // namespace icgb
