"""Walking recognition for tri-axial accelerometer data.

Pipeline: parse -> normalize to g -> resample to 10 Hz -> vector magnitude ->
amplitude gate -> Morse-wavelet transform -> harmonic-ratio test -> duration
rule. Plus tooling to tune thresholds by ROC sweeps, score detections against
activity labels, and fit the sensitivity bias regression.
"""

from .cwt import (
    DEFAULT_BAND,
    CwtPlan,
    FrequencyGrid,
    MorseParams,
    Scalogram,
    build_grid,
    detection_grid,
    morse_frequency_response,
    transform,
)
from .detect import (
    PROFILES,
    SMARTPHONE,
    SMARTWATCH,
    DetectorParams,
    PerSecondLabels,
    WalkingBout,
    detect,
    params_for_profile,
    summarize_bouts,
    window_ratio_test,
)
from .errors import (
    BadBand,
    BadSpec,
    ConfigError,
    Empty,
    EmptyRecording,
    IncompleteRows,
    LengthMismatch,
    MissingColumn,
    NoLabels,
    NoNegatives,
    NonMonotonicTime,
    NoPositives,
    RankDeficient,
    TooShort,
    WalkrecError,
)
from .evaluate import (
    AccuracyReport,
    ActivityGrouping,
    ConfusionCounts,
    OlsFit,
    RegressionResult,
    RocCurve,
    TuningRecord,
    build_report,
    default_stage_grids,
    dump_features,
    ols_fit,
    roc_sweep,
    rocch_auc,
    score,
    staged_tuning,
    standard_reg,
    subject_average,
    trapezoid_auc,
    window_labels,
)
from .ingest import (
    G_MS2,
    RawRecording,
    RecordingMeta,
    UniformRecording,
    normalize_units,
    parse_csv,
    resample_10hz,
)
from .preprocess import (
    STATIONARY_ADJUSTED_LABEL,
    VmSeries,
    WindowGrid,
    adjust_walk_labels,
    amplitude_gate,
    vector_magnitude,
)
from .synth import Segment, SynthSpec, generate, spec_from_dict

__version__ = "0.1.0"

__all__ = [
    "AccuracyReport",
    "ActivityGrouping",
    "BadBand",
    "BadSpec",
    "ConfigError",
    "ConfusionCounts",
    "CwtPlan",
    "DEFAULT_BAND",
    "DetectorParams",
    "Empty",
    "EmptyRecording",
    "FrequencyGrid",
    "G_MS2",
    "IncompleteRows",
    "LengthMismatch",
    "MissingColumn",
    "MorseParams",
    "NoLabels",
    "NoNegatives",
    "NonMonotonicTime",
    "NoPositives",
    "PROFILES",
    "PerSecondLabels",
    "RankDeficient",
    "RawRecording",
    "RecordingMeta",
    "RegressionResult",
    "RocCurve",
    "SMARTPHONE",
    "SMARTWATCH",
    "STATIONARY_ADJUSTED_LABEL",
    "Scalogram",
    "Segment",
    "SynthSpec",
    "TooShort",
    "TuningRecord",
    "UniformRecording",
    "VmSeries",
    "WalkingBout",
    "WalkrecError",
    "WindowGrid",
    "OlsFit",
    "adjust_walk_labels",
    "amplitude_gate",
    "build_grid",
    "build_report",
    "detection_grid",
    "default_stage_grids",
    "detect",
    "dump_features",
    "generate",
    "ols_fit",
    "trapezoid_auc",
    "morse_frequency_response",
    "normalize_units",
    "params_for_profile",
    "parse_csv",
    "resample_10hz",
    "roc_sweep",
    "rocch_auc",
    "score",
    "spec_from_dict",
    "staged_tuning",
    "standard_reg",
    "subject_average",
    "summarize_bouts",
    "transform",
    "vector_magnitude",
    "window_labels",
    "window_ratio_test",
]
