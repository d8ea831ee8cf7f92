"""Per-second walking classification and bout summaries.

A one-second window counts as walking when (1) its peak-to-peak amplitude
passes the gate, (2) the harmonic-ratio test passes, and (3) it belongs to a
run of at least T consecutive such windows. The ratio test compares the
maximum wavelet coefficient inside the step-frequency band against the maxima
below and above it:

    walk  iff  alpha * M_in > M_lo  and  beta * M_in > M_hi

with strict inequalities, so an all-zero scalogram is non-walking. Band
membership is inclusive; below/above are strict. Runs of gated windows
shorter than T skip the transform entirely: they cannot satisfy the duration
rule, so the result is identical and the transform input stays small.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .cwt import CwtPlan, FrequencyGrid, MorseParams, Scalogram, detection_grid, extend_for_transform, get_plan
from .errors import BadBand, TooShort
from .preprocess import SAMPLES_PER_WINDOW, VmSeries, window_p2p


@dataclass(frozen=True)
class DetectorParams:
    """Tuning parameters of the walking detector."""

    a_threshold: float  # minimum peak-to-peak amplitude, g
    f_min: float  # step-frequency band, Hz
    f_max: float
    alpha: float  # sub-harmonic ratio bound (below-band)
    beta: float  # higher-harmonic ratio bound (above-band)
    min_windows: int  # T: consecutive one-second windows required
    profile: str = "custom"

    def __post_init__(self):
        if self.a_threshold <= 0:
            raise ValueError("a_threshold must be positive")
        if not (0 < self.f_min < self.f_max < 5.0):
            raise ValueError("need 0 < f_min < f_max < 5 Hz")
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be positive")
        if self.min_windows < 1:
            raise ValueError("min_windows must be at least 1")

    @property
    def band(self) -> tuple[float, float]:
        return (self.f_min, self.f_max)


# Validated defaults per device family.
SMARTPHONE = DetectorParams(
    a_threshold=0.3, f_min=1.4, f_max=2.3, alpha=0.6, beta=2.5, min_windows=3,
    profile="smartphone",
)
SMARTWATCH = DetectorParams(
    a_threshold=0.3, f_min=1.4, f_max=2.3, alpha=31.7, beta=1.4, min_windows=6,
    profile="smartwatch",
)
PROFILES = {"smartphone": SMARTPHONE, "smartwatch": SMARTWATCH}


@dataclass
class PerSecondLabels:
    """Walking decision per one-second window.

    ``dominant_freq`` holds the in-band dominant frequency (Hz) where
    ``walking`` is true and NaN elsewhere.
    """

    n_windows: int
    walking: np.ndarray
    dominant_freq: np.ndarray


@dataclass
class WalkingBout:
    """A maximal run of walking windows with cadence and step estimates."""

    start_s: float
    duration_s: float
    cadence_hz: float
    steps: float


def _band_masks(freqs: np.ndarray, band: tuple[float, float]):
    f_min, f_max = band
    in_band = (freqs >= f_min) & (freqs <= f_max)
    below = freqs < f_min
    above = freqs > f_max
    if not (in_band.any() and below.any() and above.any()):
        raise BadBand("grid has no frequencies on one side of the band")
    return in_band, below, above


def window_ratio_test(
    scal: Scalogram, window: tuple[int, int], params: DetectorParams
) -> tuple[bool, float]:
    """Apply the harmonic-ratio test to one window of a scalogram.

    ``window`` is a (start, stop) sample range. Returns (walk, dominant_freq)
    where dominant_freq is the in-band argmax of the per-frequency maximum
    over the window (lowest frequency on ties).
    """
    in_band, below, above = _band_masks(scal.freqs, params.band)
    per_freq = scal.coeffs[:, window[0] : window[1]].max(axis=1)
    m_in = per_freq[in_band].max()
    m_lo = per_freq[below].max()
    m_hi = per_freq[above].max()
    walk = (params.alpha * m_in > m_lo) and (params.beta * m_in > m_hi)
    dominant = float(scal.freqs[in_band][np.argmax(per_freq[in_band])])
    return bool(walk), dominant


def _runs(mask: np.ndarray):
    """Yield (start, stop) of maximal True runs."""
    idx = np.nonzero(np.diff(np.r_[False, mask, False].astype(np.int8)))[0]
    return list(zip(idx[0::2], idx[1::2]))


# windows per transform tile when processing long gated runs
_TILE_WINDOWS = 6000


def window_band_stats(
    values: np.ndarray,
    plan: CwtPlan,
    band: tuple[float, float],
    start: int = 0,
    stop: int | None = None,
):
    """Per-window (m_in, m_lo, m_hi, dominant_freq) over ``values[start:stop]``.

    ``[start, stop)`` must cover whole windows. Long ranges are transformed in
    tiles that borrow real context from the surrounding samples, so tiling
    does not disturb interior coefficients.
    """
    stop = len(values) if stop is None else stop
    in_band, below, above = _band_masks(plan.grid.freqs, band)
    band_freqs = plan.grid.freqs[in_band]
    n_win = (stop - start) // SAMPLES_PER_WINDOW
    m_in = np.empty(n_win)
    m_lo = np.empty(n_win)
    m_hi = np.empty(n_win)
    dom = np.empty(n_win)
    tile = _TILE_WINDOWS * SAMPLES_PER_WINDOW
    # two supports of context per side: interior tile boundaries then agree
    # with a one-shot transform to within kernel-tail dust
    ctx = 2 * plan.pad
    for off in range(0, n_win * SAMPLES_PER_WINDOW, tile):
        a = start + off
        b = min(a + tile, start + n_win * SAMPLES_PER_WINDOW)
        mags = plan.magnitudes(extend_for_transform(values, a, b, ctx), trim=ctx)
        nw = (b - a) // SAMPLES_PER_WINDOW
        per_win = mags.reshape(len(plan.grid.freqs), nw, SAMPLES_PER_WINDOW).max(axis=2)
        w0 = off // SAMPLES_PER_WINDOW
        m_in[w0 : w0 + nw] = per_win[in_band].max(axis=0)
        m_lo[w0 : w0 + nw] = per_win[below].max(axis=0)
        m_hi[w0 : w0 + nw] = per_win[above].max(axis=0)
        dom[w0 : w0 + nw] = band_freqs[np.argmax(per_win[in_band], axis=0)]
    return m_in, m_lo, m_hi, dom


def detect(
    vm: VmSeries,
    params: DetectorParams,
    grid: FrequencyGrid | None = None,
    mp: MorseParams | None = None,
) -> PerSecondLabels:
    """Classify each full second of a vector-magnitude series.

    Pipeline: amplitude gate -> contiguous gated runs (runs shorter than T are
    skipped untransformed) -> transform per run -> harmonic-ratio test per
    window -> duration rule. Raises TooShort below ``10 * T`` samples.
    """
    if len(vm) < SAMPLES_PER_WINDOW * params.min_windows:
        raise TooShort(f"need at least {SAMPLES_PER_WINDOW * params.min_windows} samples")
    mp = mp or MorseParams()
    if grid is None:
        grid = detection_grid(fs=vm.fs, band=params.band, mp=mp)
    plan = get_plan(grid, mp, vm.fs)

    p2p = window_p2p(vm.values)
    gate = p2p >= params.a_threshold
    n_win = len(gate)

    walking = np.zeros(n_win, dtype=bool)
    dominant = np.full(n_win, np.nan)
    for w_start, w_stop in _runs(gate):
        if w_stop - w_start < params.min_windows:
            continue
        m_in, m_lo, m_hi, dom = window_band_stats(
            vm.values, plan, params.band,
            start=w_start * SAMPLES_PER_WINDOW, stop=w_stop * SAMPLES_PER_WINDOW,
        )
        ratio_ok = (params.alpha * m_in > m_lo) & (params.beta * m_in > m_hi)
        for r_start, r_stop in _runs(ratio_ok):
            if r_stop - r_start >= params.min_windows:
                sl = slice(w_start + r_start, w_start + r_stop)
                walking[sl] = True
                dominant[sl] = dom[r_start:r_stop]
    return PerSecondLabels(n_windows=n_win, walking=walking, dominant_freq=dominant)


def summarize_bouts(labels: PerSecondLabels) -> list[WalkingBout]:
    """One bout per maximal run of walking windows.

    Each window contributes its dominant frequency (steps per second) to the
    step total; cadence is steps over duration.
    """
    bouts = []
    for start, stop in _runs(labels.walking):
        steps = float(np.sum(labels.dominant_freq[start:stop]))
        duration = float(stop - start)
        bouts.append(
            WalkingBout(
                start_s=float(start), duration_s=duration,
                cadence_hz=steps / duration, steps=steps,
            )
        )
    return bouts


def params_for_profile(profile: str) -> DetectorParams:
    try:
        return PROFILES[profile]
    except KeyError:
        raise ValueError(f"unknown profile {profile!r}; expected one of {sorted(PROFILES)}")


def with_overrides(params: DetectorParams, **overrides) -> DetectorParams:
    """Copy of ``params`` with any explicit fields replaced (profile -> custom)."""
    clean = {k: v for k, v in overrides.items() if v is not None}
    if not clean:
        return params
    return replace(params, profile="custom", **clean)
