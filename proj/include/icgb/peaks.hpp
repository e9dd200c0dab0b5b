#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace icgb {

struct PeakConstraints {
    /// Minimum index separation between any two returned peaks.
    std::size_t min_distance = 0;
    double min_height = -std::numeric_limits<double>::infinity();
    /// Keep at most this many peaks (the tallest survive).
    std::optional<std::size_t> max_count;
};

/// Strict local maxima of `x` satisfying `c`, ascending by index.
///
/// A run of equal samples flanked on both sides by strictly smaller
/// neighbours counts as one maximum located at its first index; the
/// first and last samples are never peaks. Distance conflicts are
/// resolved greedily by descending height, earlier index first on ties.
std::vector<std::size_t> find_peaks(std::span<const double> x, const PeakConstraints& c);

}  // namespace icgb
