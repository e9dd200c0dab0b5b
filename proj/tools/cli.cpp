#include "cli.hpp"

#include "icgb/delineator.hpp"
#include "icgb/error.hpp"
#include "icgb/json_codec.hpp"
#include "icgb/metrics.hpp"
#include "icgb/signal_io.hpp"
#include "icgb/testkit.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace icgb::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ConfigOverrides {
    std::string config_path;
    std::optional<double> pre_c_window_ms, c_min_distance_ms, c_threshold_std_fraction, alpha,
        mb_min_peak_distance_ms, mb_threshold_divisor, epsilon_fraction, epsilon_absolute, f_low,
        f_high;
    std::optional<int> order;
    std::optional<std::string> ramp;
};

void add_config_options(CLI::App* app, ConfigOverrides& o) {
    app->add_option("--config", o.config_path,
                    std::string("JSON detector config (default: $") + kConfigEnvVar + ")");
    app->add_option("--pre-c-window-ms", o.pre_c_window_ms, "Segment length before C [250]");
    app->add_option("--c-min-distance-ms", o.c_min_distance_ms, "Minimum C-C distance [350]");
    app->add_option("--c-threshold-std-fraction", o.c_threshold_std_fraction,
                    "C threshold as a fraction of the signal std [0.8]");
    app->add_option("--alpha", o.alpha, "Constant weight after the ramp [0.1]");
    app->add_option("--ramp", o.ramp, "Weight ramp placement [start-to-min]")
        ->check(CLI::IsMember({"start-to-min", "min-to-max"}));
    app->add_option("--mb-min-peak-distance-ms", o.mb_min_peak_distance_ms,
                    "Minimum distance of the two transformed peaks [50]");
    app->add_option("--mb-threshold-divisor", o.mb_threshold_divisor,
                    "Transformed peak threshold = max / divisor [2000]");
    app->add_option("--epsilon-fraction", o.epsilon_fraction,
                    "Fallback band half-width as a fraction of h [0.05]");
    app->add_option("--epsilon-absolute", o.epsilon_absolute,
                    "Fallback band half-width in signal units (overrides the fraction)");
    app->add_option("--f-low", o.f_low, "Band-pass low cutoff, Hz [0.5]");
    app->add_option("--f-high", o.f_high, "Band-pass high cutoff, Hz [50]");
    app->add_option("--order", o.order, "Butterworth prototype order [3]");
}

DetectorConfig resolve_config(const ConfigOverrides& o) {
    DetectorConfig c;
    std::string path = o.config_path;
    if (path.empty())
        if (const char* env = std::getenv(kConfigEnvVar); env && *env) path = env;
    if (!path.empty()) {
        try {
            c = json::parse(read_text_file(path)).get<DetectorConfig>();
        } catch (const json::exception& e) {
            throw DataError(path + ": malformed config: " + e.what());
        }
    }
    auto set = [](auto& dst, const auto& src) {
        if (src) dst = *src;
    };
    set(c.pre_c_window_ms, o.pre_c_window_ms);
    set(c.c_min_distance_ms, o.c_min_distance_ms);
    set(c.c_threshold_std_fraction, o.c_threshold_std_fraction);
    set(c.alpha, o.alpha);
    if (o.ramp) c.ramp = ramp_from_string(*o.ramp);
    set(c.mb_min_peak_distance_ms, o.mb_min_peak_distance_ms);
    set(c.mb_threshold_divisor, o.mb_threshold_divisor);
    set(c.epsilon_fraction, o.epsilon_fraction);
    if (o.epsilon_absolute) c.epsilon_absolute = *o.epsilon_absolute;
    set(c.f_low, o.f_low);
    set(c.f_high, o.f_high);
    set(c.filter_order, o.order);
    c.validate();
    return c;
}

DetectionFile run_detection(const std::string& rec_path, std::optional<double> fs,
                            const DetectorConfig& cfg) {
    const Recording rec = load_recording(rec_path, fs);
    DetectionFile det;
    det.recording_id = rec.id;
    det.fs = rec.fs;
    det.config = cfg;
    det.beats = detect_b_points(rec, cfg);
    return det;
}

json trace_json(const Recording& rec, const DetectorConfig& cfg) {
    const auto filtered = bandpass(rec, cfg);
    const auto cs = detect_c_points(filtered, rec.fs, cfg);
    json beats = json::array();
    for (std::size_t c : cs) {
        const BeatTrace tr = trace_beat(filtered, c, rec.fs, cfg);
        json b = tr.detection;
        if (tr.segment) {
            b["segment_start"] = tr.segment->start_index;
            b["h"] = tr.segment->h;
            b["shifted"] = tr.segment->shifted;
            b["weights"] = tr.weights;
            b["transformed"] = tr.transformed;
        }
        beats.push_back(std::move(b));
    }
    return json{{"recording_id", rec.id}, {"fs", rec.fs}, {"config", cfg}, {"beats", beats}};
}

/// Runs `fn(i)` for i in [0, n) on at most `jobs` threads; rethrows the first failure.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn fn) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < jobs; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(mu);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"ICG B-point detection by weighted time window", "icgb"};
    app.require_subcommand(1, 1);

    // detect
    ConfigOverrides det_cfg;
    std::string det_in, det_out, det_trace;
    std::optional<double> det_fs;
    auto* detect = app.add_subcommand("detect", "Detect C- and B-points in a recording");
    detect->add_option("--in", det_in, "Recording file")->required();
    detect->add_option("--out", det_out, "Detection file to write")->required();
    detect->add_option("--fs", det_fs, "Sampling rate override, Hz");
    detect->add_option("--trace", det_trace, "Also write per-beat segment/window/transform traces");
    add_config_options(detect, det_cfg);

    // eval
    ConfigOverrides ev_cfg;
    std::string ev_det, ev_in, ev_ann, ev_out;
    std::optional<double> ev_fs;
    std::vector<double> ev_tol{30.0, 150.0};
    auto* eval = app.add_subcommand("eval", "Score detections against annotations");
    auto* ev_det_opt = eval->add_option("--det", ev_det, "Detection file");
    auto* ev_in_opt = eval->add_option("--in", ev_in, "Recording (detection runs inline)");
    ev_det_opt->excludes(ev_in_opt);
    eval->add_option("--ann", ev_ann, "Annotation file")->required();
    eval->add_option("--tol", ev_tol, "Tolerance in ms (repeatable) [30 150]")->capture_default_str();
    eval->add_option("--out", ev_out, "Write the JSON report here");
    eval->add_option("--fs", ev_fs, "Sampling rate override for --in");
    add_config_options(eval, ev_cfg);

    // synth
    SynthSpec syn;
    std::string syn_rec, syn_ann;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic ICG with ground truth");
    synth->add_option("--out-rec", syn_rec, "Recording file to write")->required();
    synth->add_option("--out-ann", syn_ann, "Ground-truth annotation file to write")->required();
    synth->add_option("--fs", syn.fs, "Sampling rate, Hz")->capture_default_str();
    synth->add_option("--beats", syn.n_beats, "Number of beats")->capture_default_str();
    synth->add_option("--hr", syn.heart_rate_bpm, "Heart rate, bpm")->capture_default_str();
    synth->add_option("--b-to-c-ms", syn.b_to_c_ms, "B notch to C peak, ms")->capture_default_str();
    synth->add_option("--notch-depth", syn.notch_depth, "Notch depth / C amplitude")->capture_default_str();
    synth->add_option("--c-amplitude", syn.c_amplitude, "C amplitude")->capture_default_str();
    synth->add_option("--noise-rms", syn.noise_rms, "White noise standard deviation")->capture_default_str();
    synth->add_option("--rr-jitter-pct", syn.rr_jitter_pct, "Beat interval jitter, %")->capture_default_str();
    synth->add_option("--seed", syn.seed, "Random seed")->capture_default_str();
    synth->add_option("--id", syn.id, "Recording id")->capture_default_str();

    // export-segments
    ConfigOverrides ex_cfg;
    std::string ex_in, ex_det, ex_out;
    std::optional<double> ex_fs;
    double ex_pre = 0.25, ex_post = 0.5;
    bool ex_raw = false;
    auto* exp = app.add_subcommand("export-segments", "Write per-beat segments for manual labelling");
    exp->add_option("--in", ex_in, "Recording file")->required();
    exp->add_option("--det", ex_det, "Take C-points from this detection file instead of detecting");
    exp->add_option("--out", ex_out, "Segment file to write")->required();
    exp->add_option("--pre-s", ex_pre, "Seconds before each C-point")->capture_default_str();
    exp->add_option("--post-s", ex_post, "Seconds after each C-point")->capture_default_str();
    exp->add_option("--fs", ex_fs, "Sampling rate override, Hz");
    exp->add_flag("--raw", ex_raw, "Export the unfiltered signal");
    add_config_options(exp, ex_cfg);

    // report
    ConfigOverrides rp_cfg;
    std::vector<std::string> rp_det, rp_in, rp_ann;
    std::vector<double> rp_tol{30.0, 150.0};
    std::string rp_out, rp_table;
    unsigned rp_jobs = std::max(1u, std::thread::hardware_concurrency());
    auto* report = app.add_subcommand("report", "Tabulate metrics over many recordings");
    auto* rp_det_opt = report->add_option("--det", rp_det, "Detection files");
    auto* rp_in_opt = report->add_option("--in", rp_in, "Recordings (detection runs inline)");
    rp_det_opt->excludes(rp_in_opt);
    report->add_option("--ann", rp_ann, "Annotation files, same order")->required();
    report->add_option("--tol", rp_tol, "Tolerance in ms (repeatable) [30 150]");
    report->add_option("--out", rp_out, "Write the JSON report here");
    report->add_option("--table", rp_table, "Write the text table here instead of stdout");
    report->add_option("--jobs", rp_jobs, "Worker threads")->check(CLI::PositiveNumber);
    add_config_options(report, rp_cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsageError;
    }

    try {
        if (*detect) {
            const DetectorConfig cfg = resolve_config(det_cfg);
            const DetectionFile det = run_detection(det_in, det_fs, cfg);
            if (!det_trace.empty())
                write_file_atomic(det_trace, trace_json(load_recording(det_in, det_fs), cfg).dump() + "\n");
            save_detections(det, det_out);
            out << det.recording_id << ": " << det.beats.size() << " beats, "
                << count_method(det.beats, Method::MB) << " MB, "
                << count_method(det.beats, Method::Fallback) << " fallback, "
                << count_method(det.beats, Method::Skipped) << " skipped\n";
        } else if (*eval) {
            if (ev_det.empty() == ev_in.empty()) throw UsageError("eval needs exactly one of --det or --in");
            const DetectionFile det = ev_det.empty() ? run_detection(ev_in, ev_fs, resolve_config(ev_cfg))
                                                     : load_detections(ev_det);
            const auto ann = load_annotations(ev_ann);
            if (ann.duplicates_collapsed > 0)
                err << "warning: collapsed " << ann.duplicates_collapsed << " duplicate annotation indices\n";
            auto rep = aggregate({evaluate_recording(det.recording_id, det.beats, ann.set, det.fs, ev_tol)});
            if (!ev_out.empty()) write_file_atomic(ev_out, json(rep).dump(2) + "\n");
            out << format_table(rep);
        } else if (*synth) {
            const SynthOutput s = synthesize_icg(syn);
            AnnotationSet truth = s.truth;
            truth.created_at = utc_timestamp();
            save_recording(s.recording, syn_rec);
            save_annotations(truth, syn_ann);
            out << s.recording.id << ": " << s.recording.samples.size() << " samples, "
                << truth.b_points.size() << " beats\n";
        } else if (*exp) {
            const Recording rec = load_recording(ex_in, ex_fs);
            const DetectorConfig cfg = resolve_config(ex_cfg);
            std::vector<std::size_t> cs;
            std::vector<double> filtered;
            if (!ex_raw || ex_det.empty()) filtered = bandpass(rec, cfg);
            if (!ex_det.empty()) {
                for (const auto& b : load_detections(ex_det).beats) cs.push_back(b.c_index);
            } else {
                cs = detect_c_points(filtered, rec.fs, cfg);
            }
            Recording view = rec;
            if (!ex_raw) view.samples = std::move(filtered);
            const std::size_t count = export_segments(view, cs, ex_pre, ex_post, ex_out);
            out << count << " segments written\n";
        } else if (*report) {
            const auto& sources = rp_det.empty() ? rp_in : rp_det;
            if (sources.empty()) throw UsageError("report needs --det or --in files");
            if (sources.size() != rp_ann.size())
                throw UsageError("report needs one --ann per " + std::string(rp_det.empty() ? "--in" : "--det"));
            const std::optional<DetectorConfig> cfg =
                rp_det.empty() ? std::optional(resolve_config(rp_cfg)) : std::nullopt;
            std::vector<RecordingReport> rows(sources.size());
            parallel_for(sources.size(), rp_jobs, [&](std::size_t i) {
                const DetectionFile det = cfg ? run_detection(sources[i], std::nullopt, *cfg)
                                              : load_detections(sources[i]);
                const auto ann = load_annotations(rp_ann[i]);
                rows[i] = evaluate_recording(det.recording_id, det.beats, ann.set, det.fs, rp_tol);
            });
            const EvalReport rep = aggregate(std::move(rows));
            if (!rp_out.empty()) write_file_atomic(rp_out, json(rep).dump(2) + "\n");
            if (!rp_table.empty())
                write_file_atomic(rp_table, format_table(rep));
            else
                out << format_table(rep);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const ConfigError& e) {
        err << "invalid configuration: " << e.what() << '\n';
        return kUsageError;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
    return kOk;
}

}  // namespace icgb::cli
