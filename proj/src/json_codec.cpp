#include "icgb/json_codec.hpp"

#include "icgb/error.hpp"

#include <set>
#include <string>

namespace icgb {

using nlohmann::json;

void to_json(json& j, const DetectorConfig& c) {
    j = json{
        {"pre_c_window_ms", c.pre_c_window_ms},
        {"c_min_distance_ms", c.c_min_distance_ms},
        {"c_threshold_std_fraction", c.c_threshold_std_fraction},
        {"alpha", c.alpha},
        {"ramp", std::string(to_string(c.ramp))},
        {"mb_min_peak_distance_ms", c.mb_min_peak_distance_ms},
        {"mb_threshold_divisor", c.mb_threshold_divisor},
        {"epsilon_fraction", c.epsilon_fraction},
        {"epsilon_absolute", c.epsilon_absolute ? json(*c.epsilon_absolute) : json(nullptr)},
        {"filter_order", c.filter_order},
        {"f_low", c.f_low},
        {"f_high", c.f_high},
    };
}

void from_json(const json& j, DetectorConfig& c) {
    if (!j.is_object()) throw DataError("detector config must be a JSON object");
    static const std::set<std::string> known{
        "pre_c_window_ms", "c_min_distance_ms", "c_threshold_std_fraction", "alpha", "ramp",
        "mb_min_peak_distance_ms", "mb_threshold_divisor", "epsilon_fraction", "epsilon_absolute",
        "filter_order", "f_low", "f_high"};
    for (const auto& [key, _] : j.items())
        if (!known.contains(key)) throw DataError("unknown detector config key '" + key + "'");

    auto num = [&](const char* key, double& dst) {
        if (!j.contains(key)) return;
        if (!j.at(key).is_number()) throw DataError(std::string("config key '") + key + "' must be a number");
        dst = j.at(key).get<double>();
    };
    num("pre_c_window_ms", c.pre_c_window_ms);
    num("c_min_distance_ms", c.c_min_distance_ms);
    num("c_threshold_std_fraction", c.c_threshold_std_fraction);
    num("alpha", c.alpha);
    num("mb_min_peak_distance_ms", c.mb_min_peak_distance_ms);
    num("mb_threshold_divisor", c.mb_threshold_divisor);
    num("epsilon_fraction", c.epsilon_fraction);
    num("f_low", c.f_low);
    num("f_high", c.f_high);
    if (j.contains("epsilon_absolute")) {
        const auto& e = j.at("epsilon_absolute");
        if (e.is_null())
            c.epsilon_absolute.reset();
        else if (e.is_number())
            c.epsilon_absolute = e.get<double>();
        else
            throw DataError("config key 'epsilon_absolute' must be a number or null");
    }
    if (j.contains("ramp")) {
        if (!j.at("ramp").is_string()) throw DataError("config key 'ramp' must be a string");
        try {
            c.ramp = ramp_from_string(j.at("ramp").get<std::string>());
        } catch (const ConfigError& e) {
            throw DataError(e.what());
        }
    }
    if (j.contains("filter_order")) {
        if (!j.at("filter_order").is_number_integer())
            throw DataError("config key 'filter_order' must be an integer");
        c.filter_order = j.at("filter_order").get<int>();
    }
}

void to_json(json& j, const BeatDetection& b) {
    j = json{{"c_index", b.c_index},
             {"b_index", b.b_index ? json(*b.b_index) : json(nullptr)},
             {"method", std::string(to_string(b.method))}};
    if (b.transformed_peaks)
        j["transformed_peaks"] = {b.transformed_peaks->first, b.transformed_peaks->second};
}

void from_json(const json& j, BeatDetection& b) {
    try {
        b.c_index = j.at("c_index").get<std::size_t>();
        b.method = method_from_string(j.at("method").get<std::string>());
        const auto& bi = j.at("b_index");
        if (bi.is_null())
            b.b_index.reset();
        else
            b.b_index = bi.get<std::size_t>();
        if (j.contains("transformed_peaks") && !j.at("transformed_peaks").is_null()) {
            const auto& tp = j.at("transformed_peaks");
            b.transformed_peaks = std::make_pair(tp.at(0).get<std::size_t>(), tp.at(1).get<std::size_t>());
        } else {
            b.transformed_peaks.reset();
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed beat record: ") + e.what());
    }
    if ((b.method == Method::Skipped) != !b.b_index.has_value())
        throw DataError("beat at C=" + std::to_string(b.c_index) +
                        ": b_index must be null exactly when method is Skipped");
}

void to_json(json& j, const AnnotationSet& a) {
    j = json{{"recording_id", a.recording_id},
             {"annotator", a.annotator},
             {"created_at", a.created_at},
             {"b_points", a.b_points}};
    if (a.c_points) j["c_points"] = *a.c_points;
}

void to_json(json& j, const ToleranceScore& s) {
    j = json{{"tolerance_ms", s.tolerance_ms}, {"tp", s.tp}, {"fd", s.fd}, {"md", s.md},
             {"acc", s.acc}, {"se", s.acc}, {"de", s.de}, {"pp", s.pp}};
}

void to_json(json& j, const RecordingReport& r) {
    j = json{{"id", r.id},
             {"scores", r.scores},
             {"missed", r.missed},
             {"n", r.n},
             {"mean_error_ms", r.mean_error_ms},
             {"sd_error_ms", r.sd_error_ms}};
}

void to_json(json& j, const EvalReport& r) {
    json agg = json::array();
    for (const auto& a : r.aggregate) {
        agg.push_back({{"tolerance_ms", a.tolerance_ms},
                       {"acc", {{"mean", a.acc.mean}, {"sd", a.acc.sd}}},
                       {"de", {{"mean", a.de.mean}, {"sd", a.de.sd}}},
                       {"pp", {{"mean", a.pp.mean}, {"sd", a.pp.sd}}}});
    }
    j = json{{"recordings", r.recordings},
             {"aggregate", agg},
             {"missed_sum", r.missed_sum},
             {"n_sum", r.n_sum},
             {"single_recording", r.single}};
}

}  // namespace icgb
