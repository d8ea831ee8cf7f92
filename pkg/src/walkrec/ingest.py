"""Parse accelerometer recordings, normalize units to g, resample to 10 Hz.

Input files are UTF-8 CSV with header ``t,x,y,z`` or ``t,x,y,z,label``;
``t`` is numeric seconds. Rows with non-finite numeric fields are dropped
and counted. Resampling interpolates each axis linearly onto a uniform
10 Hz grid and splits the recording wherever consecutive timestamps are
more than ``max_gap_s`` apart, so no motion is fabricated across gaps.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import pandas as pd

from .errors import EmptyRecording, MissingColumn, NonMonotonicTime

G_MS2 = 9.80665  # standard gravity, m/s^2 per g

TARGET_FS = 10.0

# timestamps closer than this are duplicates (keep first occurrence)
DUP_TOL_S = 1e-9

SENSOR_LOCATIONS = ("thigh", "waist", "chest", "arm", "wrist", "unspecified")
DEVICE_PROFILES = ("smartphone", "smartwatch")
ENVIRONMENTS = ("controlled", "free_living")


@dataclass(frozen=True)
class RecordingMeta:
    """Who/where/how a recording was collected."""

    subject: str = "unknown"
    location: str = "unspecified"
    device: str = "smartphone"
    environment: str = "controlled"

    def __post_init__(self):
        if self.location not in SENSOR_LOCATIONS:
            raise ValueError(f"unknown sensor location {self.location!r}")
        if self.device not in DEVICE_PROFILES:
            raise ValueError(f"unknown device profile {self.device!r}")
        if self.environment not in ENVIRONMENTS:
            raise ValueError(f"unknown environment {self.environment!r}")


@dataclass
class RawRecording:
    """Timestamped tri-axial samples as parsed, in declared units.

    ``timestamps`` are seconds, finite and non-decreasing; ``samples`` is an
    (N, 3) float array; ``labels`` is an optional length-N array of activity
    strings. ``dropped_rows`` counts non-finite rows removed at parse time,
    ``duplicate_rows`` counts near-duplicate timestamps removed (first kept).
    """

    timestamps: np.ndarray
    samples: np.ndarray
    units: str = "g"
    labels: np.ndarray | None = None
    meta: RecordingMeta = field(default_factory=RecordingMeta)
    dropped_rows: int = 0
    duplicate_rows: int = 0

    def __post_init__(self):
        self.timestamps = np.asarray(self.timestamps, dtype=float)
        self.samples = np.asarray(self.samples, dtype=float)
        if self.units not in ("g", "m_per_s2"):
            raise ValueError(f"units must be 'g' or 'm_per_s2', got {self.units!r}")
        if self.samples.ndim != 2 or self.samples.shape[1] != 3:
            raise ValueError("samples must be an (N, 3) array")
        if len(self.timestamps) != len(self.samples):
            raise ValueError("timestamps and samples length mismatch")
        if len(self.timestamps) == 0:
            raise EmptyRecording("recording has zero samples")
        if not np.all(np.isfinite(self.timestamps)):
            raise ValueError("timestamps must be finite")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("samples must be finite")
        if np.any(np.diff(self.timestamps) < -DUP_TOL_S):
            raise NonMonotonicTime("timestamps decrease")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=object)
            if len(self.labels) != len(self.samples):
                raise ValueError("labels and samples length mismatch")

    def __len__(self) -> int:
        return len(self.timestamps)


@dataclass
class UniformRecording:
    """Tri-axial signal on an exact ``1/fs`` grid, in g."""

    fs: float
    start_time: float
    samples: np.ndarray
    labels: np.ndarray | None = None
    meta: RecordingMeta = field(default_factory=RecordingMeta)

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 2 or self.samples.shape[1] != 3:
            raise ValueError("samples must be an (N, 3) array")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("samples must be finite")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=object)
            if len(self.labels) != len(self.samples):
                raise ValueError("labels and samples length mismatch")

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def times(self) -> np.ndarray:
        return self.start_time + np.arange(len(self.samples)) / self.fs


def parse_csv(path, units: str = "g", meta: RecordingMeta | None = None) -> RawRecording:
    """Read a ``t,x,y,z[,label]`` CSV into a RawRecording.

    Rows containing a non-finite value in any numeric column are dropped and
    counted in ``dropped_rows``. Timestamps within 1e-9 s of the previous row
    are duplicates: the first occurrence is kept. Extra columns are ignored.

    Raises MissingColumn, EmptyRecording, or NonMonotonicTime.
    """
    df = pd.read_csv(path)
    df.columns = [str(c).strip() for c in df.columns]
    for col in ("t", "x", "y", "z"):
        if col not in df.columns:
            raise MissingColumn(f"{path}: header lacks required column {col!r}")
    has_label = "label" in df.columns

    t = pd.to_numeric(df["t"], errors="coerce").to_numpy(dtype=float)
    xyz = np.column_stack(
        [pd.to_numeric(df[c], errors="coerce").to_numpy(dtype=float) for c in ("x", "y", "z")]
    )
    finite = np.isfinite(t) & np.all(np.isfinite(xyz), axis=1)
    dropped = int(np.count_nonzero(~finite))
    t, xyz = t[finite], xyz[finite]
    labels = df["label"].astype(str).to_numpy(dtype=object)[finite] if has_label else None

    if len(t) == 0:
        raise EmptyRecording(f"{path}: zero valid rows")
    if np.any(np.diff(t) < -DUP_TOL_S):
        raise NonMonotonicTime(f"{path}: timestamps decrease")

    keep = np.concatenate([[True], np.diff(t) > DUP_TOL_S])
    duplicates = int(np.count_nonzero(~keep))
    t, xyz = t[keep], xyz[keep]
    if labels is not None:
        labels = labels[keep]

    return RawRecording(
        timestamps=t,
        samples=xyz,
        units=units,
        labels=labels,
        meta=meta or RecordingMeta(),
        dropped_rows=dropped,
        duplicate_rows=duplicates,
    )


def normalize_units(rec: RawRecording) -> RawRecording:
    """Convert m/s^2 data to g (divide by 9.80665); identity if already in g."""
    if rec.units == "g":
        return rec
    return replace(rec, samples=rec.samples / G_MS2, units="g")


def _nearest_labels(src_t: np.ndarray, labels: np.ndarray, grid_t: np.ndarray) -> np.ndarray:
    # nearest neighbor in time; midpoints (within float dust) resolve to the
    # earlier sample
    idx = np.searchsorted(src_t, grid_t)
    idx = np.clip(idx, 1, len(src_t) - 1)
    left_closer = (grid_t - src_t[idx - 1]) <= (src_t[idx] - grid_t) + DUP_TOL_S
    return labels[np.where(left_closer, idx - 1, idx)]


def resample_10hz(rec: RawRecording, max_gap_s: float = 1.0) -> list[UniformRecording]:
    """Linearly interpolate onto a 10 Hz grid, splitting at timestamp gaps.

    Consecutive-timestamp gaps larger than ``max_gap_s`` split the output into
    separate UniformRecordings; nothing is interpolated across a gap. Labels,
    when present, are carried over by nearest-neighbor in time. Spans with
    fewer than two samples are skipped; if none qualify, EmptyRecording.
    """
    if rec.units != "g":
        raise ValueError("resample_10hz expects data in g; call normalize_units first")

    t = rec.timestamps
    keep = np.concatenate([[True], np.diff(t) > DUP_TOL_S])
    t = t[keep]
    xyz = rec.samples[keep]
    labels = rec.labels[keep] if rec.labels is not None else None

    breaks = np.nonzero(np.diff(t) > max_gap_s)[0] + 1
    out: list[UniformRecording] = []
    for lo, hi in zip(np.r_[0, breaks], np.r_[breaks, len(t)]):
        if hi - lo < 2:
            continue
        ct, cs = t[lo:hi], xyz[lo:hi]
        n = int(np.floor((ct[-1] - ct[0]) * TARGET_FS + 1e-9)) + 1
        grid = ct[0] + np.arange(n) / TARGET_FS
        res = np.column_stack([np.interp(grid, ct, cs[:, k]) for k in range(3)])
        lab = _nearest_labels(ct, labels[lo:hi], grid) if labels is not None else None
        out.append(
            UniformRecording(fs=TARGET_FS, start_time=ct[0], samples=res, labels=lab, meta=rec.meta)
        )
    if not out:
        raise EmptyRecording("no span has at least two samples")
    return out
