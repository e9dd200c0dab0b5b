// Python bindings for the icgb core.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "icgb/delineator.hpp"
#include "icgb/error.hpp"
#include "icgb/filter.hpp"
#include "icgb/metrics.hpp"
#include "icgb/peaks.hpp"
#include "icgb/signal_io.hpp"
#include "icgb/testkit.hpp"

#include <limits>
#include <span>

namespace py = pybind11;
using namespace icgb;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::span<const double> view(const Array& a) {
    if (a.ndim() != 1) throw py::value_error("expected a 1-D array");
    return {a.data(), static_cast<std::size_t>(a.shape(0))};
}

Array to_array(const std::vector<double>& v) {
    Array out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

Recording make_recording(const Array& samples, double fs) {
    Recording r;
    r.fs = fs;
    const auto s = view(samples);
    r.samples.assign(s.begin(), s.end());
    return r;
}

}  // namespace

PYBIND11_MODULE(_icgb, m) {
    m.doc() = "ICG B-point detection by weighted time window";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<Biquad>(m, "Biquad")
        .def_readonly("b0", &Biquad::b0)
        .def_readonly("b1", &Biquad::b1)
        .def_readonly("b2", &Biquad::b2)
        .def_readonly("a1", &Biquad::a1)
        .def_readonly("a2", &Biquad::a2);

    py::class_<FilterCoefficients>(m, "FilterCoefficients")
        .def_readonly("sections", &FilterCoefficients::sections)
        .def_readonly("gain", &FilterCoefficients::gain)
        .def_property_readonly("order", &FilterCoefficients::order)
        .def("response", [](const FilterCoefficients& c, double f, double fs) {
            return frequency_response(c, f, fs);
        }, py::arg("f"), py::arg("fs"));

    m.def("design_bandpass", [](int order, double f_low, double f_high, double fs) {
        return design_bandpass(FilterSpec{order, f_low, f_high, fs});
    }, py::arg("order") = 3, py::arg("f_low") = 0.5, py::arg("f_high") = 50.0, py::arg("fs") = 2000.0);

    m.def("filtfilt", [](const FilterCoefficients& c, const Array& x) {
        return to_array(filtfilt(c, view(x)));
    }, py::arg("coeffs"), py::arg("x"));

    m.def("find_peaks", [](const Array& x, std::size_t min_distance, double min_height,
                           std::optional<std::size_t> max_count) {
        return find_peaks(view(x), PeakConstraints{min_distance, min_height, max_count});
    }, py::arg("x"), py::arg("min_distance") = 0,
       py::arg("min_height") = -std::numeric_limits<double>::infinity(),
       py::arg("max_count") = py::none());

    py::enum_<RampAnchor>(m, "RampAnchor")
        .value("StartToMin", RampAnchor::StartToMin)
        .value("MinToMax", RampAnchor::MinToMax);

    py::class_<DetectorConfig>(m, "DetectorConfig")
        .def(py::init<>())
        .def_readwrite("pre_c_window_ms", &DetectorConfig::pre_c_window_ms)
        .def_readwrite("c_min_distance_ms", &DetectorConfig::c_min_distance_ms)
        .def_readwrite("c_threshold_std_fraction", &DetectorConfig::c_threshold_std_fraction)
        .def_readwrite("alpha", &DetectorConfig::alpha)
        .def_readwrite("ramp", &DetectorConfig::ramp)
        .def_readwrite("mb_min_peak_distance_ms", &DetectorConfig::mb_min_peak_distance_ms)
        .def_readwrite("mb_threshold_divisor", &DetectorConfig::mb_threshold_divisor)
        .def_readwrite("epsilon_fraction", &DetectorConfig::epsilon_fraction)
        .def_readwrite("epsilon_absolute", &DetectorConfig::epsilon_absolute)
        .def_readwrite("filter_order", &DetectorConfig::filter_order)
        .def_readwrite("f_low", &DetectorConfig::f_low)
        .def_readwrite("f_high", &DetectorConfig::f_high)
        .def("validate", &DetectorConfig::validate);

    py::enum_<Method>(m, "Method")
        .value("MB", Method::MB)
        .value("Fallback", Method::Fallback)
        .value("Skipped", Method::Skipped);

    py::class_<BeatDetection>(m, "BeatDetection")
        .def_readonly("c_index", &BeatDetection::c_index)
        .def_readonly("b_index", &BeatDetection::b_index)
        .def_readonly("method", &BeatDetection::method)
        .def_readonly("transformed_peaks", &BeatDetection::transformed_peaks)
        .def("__repr__", [](const BeatDetection& b) {
            return "BeatDetection(c=" + std::to_string(b.c_index) + ", b=" +
                   (b.b_index ? std::to_string(*b.b_index) : std::string("None")) + ", " +
                   std::string(to_string(b.method)) + ")";
        });

    py::class_<Segment>(m, "Segment")
        .def_readonly("start_index", &Segment::start_index)
        .def_property_readonly("raw", [](const Segment& s) { return to_array(s.raw); })
        .def_property_readonly("shifted", [](const Segment& s) { return to_array(s.shifted); })
        .def_readonly("h", &Segment::h)
        .def_readonly("argmin_local", &Segment::argmin_local)
        .def_readonly("argmax_local", &Segment::argmax_local);

    m.def("bandpass", [](const Array& x, double fs, const DetectorConfig& cfg) {
        return to_array(bandpass(make_recording(x, fs), cfg));
    }, py::arg("samples"), py::arg("fs"), py::arg("config") = DetectorConfig{});

    m.def("detect_c_points", [](const Array& filtered, double fs, const DetectorConfig& cfg) {
        return detect_c_points(view(filtered), fs, cfg);
    }, py::arg("filtered"), py::arg("fs"), py::arg("config") = DetectorConfig{});

    m.def("extract_segment", [](const Array& filtered, std::size_t c, double fs, const DetectorConfig& cfg) {
        return extract_segment(view(filtered), c, fs, cfg);
    }, py::arg("filtered"), py::arg("c_index"), py::arg("fs"), py::arg("config") = DetectorConfig{});

    m.def("build_weight_window", [](const Segment& s, double alpha, RampAnchor ramp) -> std::optional<Array> {
        auto w = build_weight_window(s, alpha, ramp);
        if (!w) return std::nullopt;
        return to_array(*w);
    }, py::arg("segment"), py::arg("alpha") = 0.1, py::arg("ramp") = RampAnchor::StartToMin);

    m.def("transform_segment", [](const Array& shifted, const Array& w) {
        return to_array(transform_segment(view(shifted), view(w)));
    }, py::arg("shifted"), py::arg("weights"));

    m.def("locate_mb_point", [](const Array& t, double fs, const DetectorConfig& cfg)
              -> std::optional<std::size_t> {
        auto mb = locate_mb_point(view(t), fs, cfg);
        if (!mb) return std::nullopt;
        return mb->valley;
    }, py::arg("transformed"), py::arg("fs"), py::arg("config") = DetectorConfig{});

    m.def("fallback_b_point", &fallback_b_point, py::arg("segment"), py::arg("config") = DetectorConfig{});

    m.def("detect_b_points", [](const Array& x, double fs, const DetectorConfig& cfg) {
        const Recording rec = make_recording(x, fs);
        py::gil_scoped_release release;
        return detect_b_points(rec, cfg);
    }, py::arg("samples"), py::arg("fs"), py::arg("config") = DetectorConfig{});

    m.def("sensitivity", &sensitivity, py::arg("tp"), py::arg("fd"));
    m.def("positive_predictivity", &positive_predictivity, py::arg("tp"), py::arg("md"));
    m.def("detection_error", &detection_error, py::arg("tp"), py::arg("fd"), py::arg("md"));

    m.def("match_beats", [](const std::vector<BeatDetection>& det, const std::vector<std::size_t>& b_points,
                            double tolerance_ms, double fs) {
        AnnotationSet ann;
        ann.b_points = b_points;
        const MatchResult r = match_beats(det, ann, tolerance_ms, fs);
        return py::dict(py::arg("tp") = r.tp, py::arg("fd") = r.fd, py::arg("md") = r.md,
                        py::arg("errors_ms") = r.errors_ms);
    }, py::arg("detections"), py::arg("b_points"), py::arg("tolerance_ms"), py::arg("fs"));

    m.def("synthesize", [](double fs, std::size_t n_beats, double heart_rate_bpm, double b_to_c_ms,
                           double notch_depth, double noise_rms, double rr_jitter_pct, std::uint64_t seed) {
        SynthSpec s;
        s.fs = fs;
        s.n_beats = n_beats;
        s.heart_rate_bpm = heart_rate_bpm;
        s.b_to_c_ms = b_to_c_ms;
        s.notch_depth = notch_depth;
        s.noise_rms = noise_rms;
        s.rr_jitter_pct = rr_jitter_pct;
        s.seed = seed;
        const SynthOutput o = synthesize_icg(s);
        return py::make_tuple(to_array(o.recording.samples), o.truth.b_points, *o.truth.c_points);
    }, py::arg("fs") = 2000.0, py::arg("n_beats") = 60, py::arg("heart_rate_bpm") = 72.0,
       py::arg("b_to_c_ms") = 60.0, py::arg("notch_depth") = 0.15, py::arg("noise_rms") = 0.0,
       py::arg("rr_jitter_pct") = 0.0, py::arg("seed") = 1);

    m.def("load_recording", [](const std::string& path, std::optional<double> fs) {
        const Recording r = load_recording(path, fs);
        return py::make_tuple(to_array(r.samples), r.fs, r.id, r.unit);
    }, py::arg("path"), py::arg("fs") = py::none());

    m.def("load_annotations", [](const std::string& path) {
        const auto a = load_annotations(path);
        return py::dict(py::arg("recording_id") = a.set.recording_id, py::arg("annotator") = a.set.annotator,
                        py::arg("b_points") = a.set.b_points, py::arg("c_points") = a.set.c_points,
                        py::arg("duplicates_collapsed") = a.duplicates_collapsed);
    }, py::arg("path"));
}
