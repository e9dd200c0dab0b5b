#include "icgb/signal_io.hpp"

#include "icgb/error.hpp"
#include "icgb/json_codec.hpp"

#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

namespace icgb {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_double(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, ptr) : std::to_string(v);
}

std::vector<std::size_t> read_index_list(const json& j, const char* key, std::size_t& collapsed) {
    const auto& arr = j.at(key);
    if (!arr.is_array()) throw DataError(std::string("'") + key + "' must be an array of integers");
    std::vector<std::size_t> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number_integer())
            throw DataError(std::string("'") + key + "' holds a non-integer entry");
        if (v.is_number_unsigned()) {
            out.push_back(v.get<std::size_t>());
            continue;
        }
        const auto i = v.get<long long>();
        if (i < 0)
            throw DataError(std::string("negative index ") + std::to_string(i) + " in '" + key + "'");
        out.push_back(static_cast<std::size_t>(i));
    }
    std::vector<std::size_t> dedup;
    dedup.reserve(out.size());
    for (std::size_t idx : out) {
        if (!dedup.empty() && dedup.back() == idx) {
            ++collapsed;
            continue;
        }
        if (!dedup.empty() && idx < dedup.back())
            throw DataError(std::string("indices not ascending in '") + key + "': " +
                            std::to_string(idx) + " follows " + std::to_string(dedup.back()));
        dedup.push_back(idx);
    }
    return dedup;
}

void check_ascending(const std::vector<std::size_t>& v, const char* what,
                     std::optional<std::size_t> n_samples) {
    for (std::size_t k = 1; k < v.size(); ++k)
        if (v[k] <= v[k - 1]) throw DataError(std::string(what) + " indices not ascending");
    if (n_samples)
        for (std::size_t i : v)
            if (i >= *n_samples)
                throw DataError(std::string(what) + " index " + std::to_string(i) +
                                " outside recording of " + std::to_string(*n_samples) + " samples");
}

}  // namespace

void AnnotationSet::validate(std::optional<std::size_t> n_samples) const {
    check_ascending(b_points, "B-point", n_samples);
    if (c_points) {
        check_ascending(*c_points, "C-point", n_samples);
        if (c_points->size() != b_points.size())
            throw DataError("beat count mismatch: " + std::to_string(b_points.size()) +
                            " B-points vs " + std::to_string(c_points->size()) + " C-points");
    }
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw DataError("error while reading '" + path.string() + "'");
    return ss.str();
}

void write_file_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write '" + path.string() + "'");
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw DataError("write failed for '" + path.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw DataError("cannot move output into place at '" + path.string() + "'");
    }
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Recording parse_recording(const std::string& text, std::optional<double> fs_override) {
    Recording rec;
    std::optional<double> header_fs;
    bool first = true;
    std::size_t line_no = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view s = trim(line);
        if (s.empty()) continue;
        if (s.front() == '#') {
            if (first) {
                std::istringstream hs{std::string(s.substr(1))};
                std::string tok;
                while (hs >> tok) {
                    const auto eq = tok.find('=');
                    if (eq == std::string::npos) continue;
                    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
                    if (key == "fs") {
                        double v = 0.0;
                        if (!parse_double(val, v) || !(v > 0.0) || !std::isfinite(v))
                            throw DataError("line 1: invalid sampling rate '" + val + "'");
                        header_fs = v;
                    } else if (key == "unit") {
                        rec.unit = val;
                    } else if (key == "id") {
                        rec.id = val;
                    }
                }
            }
            first = false;
            continue;
        }
        first = false;
        double v = 0.0;
        if (!parse_double(s, v))
            throw DataError("line " + std::to_string(line_no) + ": malformed row '" + std::string(s) + "'");
        if (!std::isfinite(v))
            throw DataError("line " + std::to_string(line_no) + ": non-finite sample '" +
                            std::string(s) + "'");
        rec.samples.push_back(v);
    }
    if (fs_override) {
        if (!(*fs_override > 0.0) || !std::isfinite(*fs_override))
            throw ConfigError("sampling rate override must be positive");
        rec.fs = *fs_override;
    } else if (header_fs) {
        rec.fs = *header_fs;
    } else {
        throw DataError("missing sampling rate: no 'fs=' header and no override");
    }
    if (rec.samples.empty()) throw DataError("no samples");
    return rec;
}

Recording load_recording(const fs::path& path, std::optional<double> fs_override) {
    Recording rec;
    try {
        rec = parse_recording(read_text_file(path), fs_override);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    if (rec.id.empty()) rec.id = path.stem().string();
    return rec;
}

void save_recording(const Recording& rec, const fs::path& path) {
    std::string out = "# fs=" + format_double(rec.fs) + " unit=" + (rec.unit.empty() ? "-" : rec.unit) +
                      " id=" + (rec.id.empty() ? "-" : rec.id) + "\n";
    out.reserve(out.size() + rec.samples.size() * 12);
    for (double v : rec.samples) {
        out += format_double(v);
        out += '\n';
    }
    write_file_atomic(path, out);
}

LoadedAnnotations parse_annotations(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("annotation file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw DataError("annotation file must hold a JSON object");
    if (!j.contains("b_points")) throw DataError("annotation file lacks 'b_points'");

    LoadedAnnotations out;
    auto str = [&](const char* key) {
        return j.contains(key) && j.at(key).is_string() ? j.at(key).get<std::string>() : std::string();
    };
    out.set.recording_id = str("recording_id");
    out.set.annotator = str("annotator");
    out.set.created_at = str("created_at");
    out.set.b_points = read_index_list(j, "b_points", out.duplicates_collapsed);
    if (j.contains("c_points") && !j.at("c_points").is_null())
        out.set.c_points = read_index_list(j, "c_points", out.duplicates_collapsed);
    out.set.validate();
    return out;
}

LoadedAnnotations load_annotations(const fs::path& path) {
    try {
        return parse_annotations(read_text_file(path));
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void save_annotations(const AnnotationSet& ann, const fs::path& path) {
    ann.validate();
    write_file_atomic(path, json(ann).dump(2) + "\n");
}

std::string serialize_detections(const DetectionFile& det) {
    json j{{"format", "icgb-detections"},
           {"version", 1},
           {"recording_id", det.recording_id},
           {"fs", det.fs},
           {"config", det.config},
           {"n_beats", det.beats.size()},
           {"missed", count_method(det.beats, Method::Fallback)},
           {"beats", det.beats}};
    return j.dump(2) + "\n";
}

void save_detections(const DetectionFile& det, const fs::path& path) {
    write_file_atomic(path, serialize_detections(det));
}

DetectionFile load_detections(const fs::path& path) {
    DetectionFile det;
    try {
        const json j = json::parse(read_text_file(path));
        if (j.value("format", "") != "icgb-detections")
            throw DataError("not a detection file (format tag missing)");
        det.recording_id = j.value("recording_id", "");
        det.fs = j.at("fs").get<double>();
        if (!(det.fs > 0.0)) throw DataError("invalid sampling rate");
        if (j.contains("config")) det.config = j.at("config").get<DetectorConfig>();
        det.beats = j.at("beats").get<std::vector<BeatDetection>>();
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": malformed detection file: " + e.what());
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    for (std::size_t k = 1; k < det.beats.size(); ++k)
        if (det.beats[k].c_index <= det.beats[k - 1].c_index)
            throw DataError(path.string() + ": beats not ordered by C-point index");
    return det;
}

std::vector<SegmentRecord> cut_segments(const Recording& rec, std::span<const std::size_t> c_points,
                                        double pre_s, double post_s) {
    if (!(pre_s >= 0.0) || !(post_s >= 0.0)) throw ConfigError("segment bounds must be >= 0 s");
    const std::size_t n = rec.samples.size();
    const auto pre = static_cast<std::size_t>(std::llround(pre_s * rec.fs));
    const auto post = static_cast<std::size_t>(std::llround(post_s * rec.fs));
    std::vector<SegmentRecord> out;
    out.reserve(c_points.size());
    for (std::size_t c : c_points) {
        if (c >= n)
            throw DataError("C-point " + std::to_string(c) + " outside recording of " +
                            std::to_string(n) + " samples");
        SegmentRecord seg;
        seg.clipped = c < pre || c + post > n;
        seg.start_index = c < pre ? 0 : c - pre;
        const std::size_t end = std::min(c + post, n);
        seg.samples.assign(rec.samples.begin() + static_cast<std::ptrdiff_t>(seg.start_index),
                           rec.samples.begin() + static_cast<std::ptrdiff_t>(end));
        out.push_back(std::move(seg));
    }
    return out;
}

std::size_t export_segments(const Recording& rec, std::span<const std::size_t> c_points,
                            double pre_s, double post_s, const fs::path& path) {
    const auto segs = cut_segments(rec, c_points, pre_s, post_s);
    json arr = json::array();
    for (std::size_t k = 0; k < segs.size(); ++k)
        arr.push_back({{"id", k},
                       {"start_index", segs[k].start_index},
                       {"clipped", segs[k].clipped},
                       {"samples", segs[k].samples}});
    const json j{{"format", "icgb-segments"},
                 {"version", 1},
                 {"recording_id", rec.id},
                 {"fs", rec.fs},
                 {"unit", rec.unit},
                 {"pre_s", pre_s},
                 {"post_s", post_s},
                 {"segments", arr}};
    write_file_atomic(path, j.dump() + "\n");
    return segs.size();
}

}  // namespace icgb
