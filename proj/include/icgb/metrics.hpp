#pragma once

#include "icgb/delineator.hpp"
#include "icgb/recording.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace icgb {

/// Outcome of comparing detected and annotated B-points at one tolerance.
struct MatchResult {
    std::size_t tp = 0;  // true points
    std::size_t fd = 0;  // failed detections (outside tolerance)
    std::size_t md = 0;  // missed detections (false points)
    std::vector<double> errors_ms;  // detected - annotated, per beat

    std::size_t paired() const { return tp + fd; }
};

/// Pairs the k-th non-skipped detection with the k-th annotation.
/// Throws DataError("beat count mismatch ...") if the counts differ.
MatchResult match_beats(std::span<const BeatDetection> detections, const AnnotationSet& ann,
                        double tolerance_ms, double fs);

/// Se = 100 * TP / (TP + FD)
double sensitivity(std::size_t tp, std::size_t fd);
/// PP = 100 * TP / (TP + MD)
double positive_predictivity(std::size_t tp, std::size_t md);
/// DE = 100 * (FD + MD) / (TP + FD)
double detection_error(std::size_t tp, std::size_t fd, std::size_t md);

struct ToleranceScore {
    double tolerance_ms = 0.0;
    std::size_t tp = 0;
    std::size_t fd = 0;
    std::size_t md = 0;
    double acc = 0.0;  // == Se
    double de = 0.0;
    double pp = 0.0;
};

struct RecordingReport {
    std::string id;
    std::vector<ToleranceScore> scores;  // one per tolerance, input order
    std::size_t missed = 0;              // beats resolved by the fallback rule
    std::size_t n = 0;                   // annotated beats
    double mean_error_ms = 0.0;
    double sd_error_ms = 0.0;

    const ToleranceScore& at(double tolerance_ms) const;
};

RecordingReport evaluate_recording(std::string id, std::span<const BeatDetection> detections,
                                   const AnnotationSet& ann, double fs,
                                   std::span<const double> tolerances_ms);

struct Summary {
    double mean = 0.0;
    double sd = 0.0;  // n - 1 denominator, 0 for a single value
};

/// Mean and sample standard deviation; throws on empty input.
Summary summarize(std::span<const double> values);

struct AggregateScore {
    double tolerance_ms = 0.0;
    Summary acc;
    Summary de;
    Summary pp;
};

struct EvalReport {
    std::vector<RecordingReport> recordings;
    std::vector<AggregateScore> aggregate;
    std::size_t missed_sum = 0;
    std::size_t n_sum = 0;
    /// True when only one recording contributed (sd reported as 0).
    bool single = false;
};

/// Per-metric mean +- sd across recordings; Missed and N are summed.
/// All recordings must be scored at the same tolerances.
EvalReport aggregate(std::vector<RecordingReport> reports);

/// Fixed-width text table, one row per recording plus a summary row.
std::string format_table(const EvalReport& report);

}  // namespace icgb
