#pragma once

#include "icgb/delineator.hpp"
#include "icgb/metrics.hpp"
#include "icgb/recording.hpp"

#include <json.hpp>

namespace icgb {

void to_json(nlohmann::json& j, const DetectorConfig& c);
/// Missing keys keep their defaults; unknown keys are rejected.
void from_json(const nlohmann::json& j, DetectorConfig& c);

void to_json(nlohmann::json& j, const BeatDetection& b);
void from_json(const nlohmann::json& j, BeatDetection& b);

void to_json(nlohmann::json& j, const AnnotationSet& a);

void to_json(nlohmann::json& j, const ToleranceScore& s);
void to_json(nlohmann::json& j, const RecordingReport& r);
void to_json(nlohmann::json& j, const EvalReport& r);

}  // namespace icgb
