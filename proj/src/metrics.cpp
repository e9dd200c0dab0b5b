#include "icgb/metrics.hpp"

#include "icgb/error.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace icgb {

MatchResult match_beats(std::span<const BeatDetection> detections, const AnnotationSet& ann,
                        double tolerance_ms, double fs) {
    if (!(fs > 0.0)) throw ConfigError("sampling rate must be positive");
    if (!(tolerance_ms >= 0.0)) throw ConfigError("tolerance must be non-negative");

    std::vector<std::size_t> detected;
    detected.reserve(detections.size());
    for (const auto& d : detections)
        if (d.method != Method::Skipped && d.b_index) detected.push_back(*d.b_index);

    if (detected.size() != ann.b_points.size())
        throw DataError("beat count mismatch: " + std::to_string(detected.size()) +
                        " detections vs " + std::to_string(ann.b_points.size()) + " annotations");

    MatchResult r;
    r.errors_ms.reserve(detected.size());
    for (std::size_t k = 0; k < detected.size(); ++k) {
        const double diff = static_cast<double>(detected[k]) - static_cast<double>(ann.b_points[k]);
        r.errors_ms.push_back(diff * 1000.0 / fs);
        // Compare in sample units so that e.g. 60 samples at 2 kHz is exactly 30 ms.
        if (std::abs(diff) * 1000.0 <= tolerance_ms * fs)
            ++r.tp;
        else
            ++r.fd;
    }
    return r;
}

double sensitivity(std::size_t tp, std::size_t fd) {
    if (tp + fd == 0) throw DataError("sensitivity undefined: TP + FD = 0");
    return 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fd);
}

double positive_predictivity(std::size_t tp, std::size_t md) {
    if (tp + md == 0) throw DataError("positive predictivity undefined: TP + MD = 0");
    return 100.0 * static_cast<double>(tp) / static_cast<double>(tp + md);
}

double detection_error(std::size_t tp, std::size_t fd, std::size_t md) {
    if (tp + fd == 0) throw DataError("detection error undefined: TP + FD = 0");
    return 100.0 * static_cast<double>(fd + md) / static_cast<double>(tp + fd);
}

const ToleranceScore& RecordingReport::at(double tolerance_ms) const {
    for (const auto& s : scores)
        if (s.tolerance_ms == tolerance_ms) return s;
    throw DataError("recording '" + id + "' has no score at tolerance " +
                    std::to_string(tolerance_ms) + " ms");
}

Summary summarize(std::span<const double> values) {
    if (values.empty()) throw DataError("cannot summarise an empty set");
    Summary s;
    for (double v : values) s.mean += v;
    s.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

RecordingReport evaluate_recording(std::string id, std::span<const BeatDetection> detections,
                                   const AnnotationSet& ann, double fs,
                                   std::span<const double> tolerances_ms) {
    if (tolerances_ms.empty()) throw ConfigError("at least one tolerance is required");
    RecordingReport rep;
    rep.id = std::move(id);
    rep.n = ann.b_points.size();
    rep.missed = count_method(detections, Method::Fallback);
    for (double tol : tolerances_ms) {
        const MatchResult m = match_beats(detections, ann, tol, fs);
        ToleranceScore s;
        s.tolerance_ms = tol;
        s.tp = m.tp;
        s.fd = m.fd;
        s.md = m.md;
        s.acc = sensitivity(m.tp, m.fd);
        s.de = detection_error(m.tp, m.fd, m.md);
        s.pp = m.tp + m.md > 0 ? positive_predictivity(m.tp, m.md) : 0.0;
        rep.scores.push_back(s);
        if (rep.scores.size() == 1 && !m.errors_ms.empty()) {
            const Summary e = summarize(m.errors_ms);
            rep.mean_error_ms = e.mean;
            rep.sd_error_ms = e.sd;
        }
    }
    return rep;
}

EvalReport aggregate(std::vector<RecordingReport> reports) {
    if (reports.empty()) throw DataError("nothing to aggregate: no recordings");
    EvalReport out;
    const auto& first = reports.front().scores;
    for (const auto& r : reports) {
        if (r.scores.size() != first.size())
            throw DataError("recording '" + r.id + "' scored at a different tolerance set");
        for (std::size_t k = 0; k < first.size(); ++k)
            if (r.scores[k].tolerance_ms != first[k].tolerance_ms)
                throw DataError("recording '" + r.id + "' scored at a different tolerance set");
        out.missed_sum += r.missed;
        out.n_sum += r.n;
    }
    for (std::size_t k = 0; k < first.size(); ++k) {
        std::vector<double> acc, de, pp;
        for (const auto& r : reports) {
            acc.push_back(r.scores[k].acc);
            de.push_back(r.scores[k].de);
            pp.push_back(r.scores[k].pp);
        }
        out.aggregate.push_back({first[k].tolerance_ms, summarize(acc), summarize(de), summarize(pp)});
    }
    out.single = reports.size() == 1;
    out.recordings = std::move(reports);
    return out;
}

namespace {

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string tol_label(double tol) {
    return fmt("%g", tol);
}

}  // namespace

std::string format_table(const EvalReport& report) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%-16s", "ID");
    os << line;
    for (const auto& a : report.aggregate) {
        const std::string t = tol_label(a.tolerance_ms);
        std::snprintf(line, sizeof line, " %17s", ("Acc" + t + " [%]").c_str());
        os << line;
    }
    for (const auto& a : report.aggregate) {
        const std::string t = tol_label(a.tolerance_ms);
        std::snprintf(line, sizeof line, " %17s", ("DE" + t + " [%]").c_str());
        os << line;
    }
    std::snprintf(line, sizeof line, " %8s %8s\n", "Missed", "N");
    os << line;

    for (const auto& r : report.recordings) {
        std::snprintf(line, sizeof line, "%-16.16s", r.id.c_str());
        os << line;
        for (const auto& s : r.scores) os << fmt(" %17.2f", s.acc);
        for (const auto& s : r.scores) os << fmt(" %17.2f", s.de);
        std::snprintf(line, sizeof line, " %8zu %8zu\n", r.missed, r.n);
        os << line;
    }

    std::snprintf(line, sizeof line, "%-16s", "All");
    os << line;
    for (const auto& a : report.aggregate) {
        std::snprintf(line, sizeof line, " %8.2f +- %5.2f", a.acc.mean, a.acc.sd);
        os << line;
    }
    for (const auto& a : report.aggregate) {
        std::snprintf(line, sizeof line, " %8.2f +- %5.2f", a.de.mean, a.de.sd);
        os << line;
    }
    std::snprintf(line, sizeof line, " %8zu %8zu\n", report.missed_sum, report.n_sum);
    os << line;
    return os.str();
}

}  // namespace icgb
