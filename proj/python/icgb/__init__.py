"""B-point detection in impedance cardiograms by weighted time windows."""

from ._icgb import (  # noqa: F401
    BeatDetection,
    ConfigError,
    DataError,
    DetectorConfig,
    FilterCoefficients,
    Method,
    RampAnchor,
    Segment,
    bandpass,
    build_weight_window,
    design_bandpass,
    detect_b_points,
    detect_c_points,
    detection_error,
    extract_segment,
    fallback_b_point,
    filtfilt,
    find_peaks,
    load_annotations,
    load_recording,
    locate_mb_point,
    match_beats,
    positive_predictivity,
    sensitivity,
    synthesize,
    transform_segment,
)

__version__ = "0.1.0"
