"""Vector magnitude, one-second amplitude windows, and label cleanup.

The detector consumes the orientation-free vector magnitude
``v = sqrt(x^2 + y^2 + z^2) - 1`` (in g). Intensity is measured as the
peak-to-peak amplitude over non-overlapping one-second windows anchored at
sample 0; trailing partial windows are discarded.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import NoLabels, TooShort
from .ingest import UniformRecording

SAMPLES_PER_WINDOW = 10  # one second at 10 Hz

# label given to walking-labelled seconds whose signal shows no motion
STATIONARY_ADJUSTED_LABEL = "stationary_adjusted"

# per-axis moving-SD threshold used by adjust_walk_labels, in g
MOTION_SD_G = 0.1


@dataclass
class VmSeries:
    """Gravity-subtracted vector magnitude of a uniform recording."""

    fs: float
    values: np.ndarray
    origin: UniformRecording | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1:
            raise ValueError("values must be one-dimensional")
        if len(self.values) and self.values.min() < -1.0 - 1e-12:
            raise ValueError("vector magnitude cannot fall below -1 g")

    def __len__(self) -> int:
        return len(self.values)

    @property
    def n_windows(self) -> int:
        return len(self.values) // SAMPLES_PER_WINDOW


@dataclass
class WindowGrid:
    """Per-window peak-to-peak amplitudes and the corresponding gate."""

    window_s: float
    n_windows: int
    p2p: np.ndarray
    gate: np.ndarray


def vector_magnitude(rec: UniformRecording) -> VmSeries:
    """Return ``sqrt(x^2 + y^2 + z^2) - 1`` per sample, in g."""
    vm = np.sqrt(np.sum(rec.samples**2, axis=1)) - 1.0
    return VmSeries(fs=rec.fs, values=vm, origin=rec)


def window_p2p(values: np.ndarray) -> np.ndarray:
    """Peak-to-peak amplitude over non-overlapping one-second windows."""
    values = np.asarray(values, dtype=float)
    n = len(values) // SAMPLES_PER_WINDOW
    blocks = values[: n * SAMPLES_PER_WINDOW].reshape(n, SAMPLES_PER_WINDOW)
    return blocks.max(axis=1) - blocks.min(axis=1)


def amplitude_gate(vm: VmSeries, a_threshold: float) -> WindowGrid:
    """Gate one-second windows on peak-to-peak amplitude >= ``a_threshold``.

    The comparison is inclusive: a window whose amplitude ties the threshold
    passes. Raises TooShort for signals under one full window.
    """
    if a_threshold <= 0:
        raise ValueError("amplitude threshold must be positive")
    if len(vm.values) < SAMPLES_PER_WINDOW:
        raise TooShort("need at least 10 samples (one full second)")
    p2p = window_p2p(vm.values)
    return WindowGrid(window_s=1.0, n_windows=len(p2p), p2p=p2p, gate=p2p >= a_threshold)


def adjust_walk_labels(rec: UniformRecording, walking_label_set: set[str]) -> UniformRecording:
    """Relabel walking-labelled seconds that show no motion.

    For each full one-second window, the per-axis population standard
    deviation is compared with 0.1 g. If fewer than 2 of the 3 axes exceed it,
    every sample in that window whose label is in ``walking_label_set`` is
    relabelled ``stationary_adjusted``. Other labels are never touched, and
    nothing is ever relabelled *to* walking.
    """
    if rec.labels is None:
        raise NoLabels("recording has no activity labels")
    n = len(rec) // SAMPLES_PER_WINDOW
    labels = rec.labels.copy()
    if n:
        blocks = rec.samples[: n * SAMPLES_PER_WINDOW].reshape(n, SAMPLES_PER_WINDOW, 3)
        sd = blocks.std(axis=1)  # population SD over the 10 samples
        still = (sd > MOTION_SD_G).sum(axis=1) < 2
        walk_mask = np.isin(labels, list(walking_label_set))
        window_still = np.repeat(still, SAMPLES_PER_WINDOW)
        hit = np.zeros(len(labels), dtype=bool)
        hit[: n * SAMPLES_PER_WINDOW] = window_still
        labels[hit & walk_mask] = STATIONARY_ADJUSTED_LABEL
    return replace(rec, labels=labels)
