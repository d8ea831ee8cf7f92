"""Continuous wavelet transform with a generalized Morse mother wavelet.

The mother wavelet is defined in the frequency domain as

    response(w) = U(w) * a * w**(p2/gamma) * exp(-w**gamma)

where ``U`` is the unit step and ``a`` normalizes the peak value to 2 (the
usual convention for analytic wavelets; every downstream decision is a ratio
or argmax of coefficients, so the constant cancels). The defaults gamma=3,
p2=60 give a wavelet nearly symmetric in both time and frequency.

Each scalogram row is computed by multiplying the segment's DFT with the
response rescaled so its peak sits at the row's frequency, then inverse
transforming. Rows analysing near the top of the grid would otherwise pick up
the mirror line of real tones just below Nyquist, so the sampled response is
rolled off smoothly (C^3) over the last tenth of the digital band instead of
being cut at Nyquist; the smooth roll-off keeps the effective kernel's tails
negligible, which lets the transform agree with a plain time-domain
evaluation of the same integral to better than 1e-6. Segments are
reflect-padded by one wavelet support length per side (support = span where
the time-domain envelope exceeds 1% of its maximum) and trimmed after, to
suppress edge artifacts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.fft import fft, ifft, next_fast_len

from .errors import BadBand, TooShort

DEFAULT_BAND = (1.4, 2.3)  # step-frequency band, Hz


@dataclass(frozen=True)
class MorseParams:
    """Generalized Morse wavelet parameters.

    ``gamma`` controls symmetry, ``p2`` is the time-bandwidth product, and
    ``norm_constant`` is the peak-value-2 normalization (derived unless
    given). The frequency-domain exponent of w is ``p2/gamma`` and the peak
    sits at ``(p2/gamma**2)**(1/gamma)`` rad/s.
    """

    gamma: float = 3.0
    p2: float = 60.0
    norm_constant: float | None = None

    def __post_init__(self):
        if self.gamma <= 0 or self.p2 <= 0:
            raise ValueError("gamma and p2 must be positive")
        if self.norm_constant is None:
            b = self.p2 / self.gamma
            ln_peak = (b / self.gamma) * (np.log(b / self.gamma) - 1.0)
            object.__setattr__(self, "norm_constant", float(2.0 * np.exp(-ln_peak)))
        elif self.norm_constant <= 0:
            raise ValueError("norm_constant must be positive")

    @property
    def power_exponent(self) -> float:
        return self.p2 / self.gamma

    @property
    def peak_omega(self) -> float:
        """Angular frequency (rad/s) where the response is maximal."""
        b = self.p2 / self.gamma
        return float((b / self.gamma) ** (1.0 / self.gamma))


def morse_frequency_response(mp: MorseParams, omega) -> np.ndarray | float:
    """Evaluate the Morse frequency response at angular frequency ``omega``.

    Zero for omega <= 0; the maximum value is 2 at ``mp.peak_omega`` (scaled
    by ``norm_constant / default`` if a custom constant was supplied).
    """
    w = np.asarray(omega, dtype=float)
    scalar = w.ndim == 0
    w = np.atleast_1d(w)
    out = np.zeros_like(w)
    pos = w > 0
    b = mp.power_exponent
    out[pos] = mp.norm_constant * np.exp(b * np.log(w[pos]) - w[pos] ** mp.gamma)
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class FrequencyGrid:
    """Strictly increasing analysis frequencies with the step band marked."""

    freqs: np.ndarray
    band: tuple[float, float]

    def __post_init__(self):
        freqs = np.asarray(self.freqs, dtype=float)
        object.__setattr__(self, "freqs", freqs)
        if np.any(np.diff(freqs) <= 0):
            raise BadBand("grid frequencies must be strictly increasing")
        f_min, f_max = self.band
        for name, count in (
            ("below the band", np.count_nonzero(freqs < f_min)),
            ("inside the band", np.count_nonzero((freqs >= f_min) & (freqs <= f_max))),
            ("above the band", np.count_nonzero(freqs > f_max)),
        ):
            # below- and above-band maxima must have candidates
            if count < 1:
                raise BadBand(f"grid needs frequencies {name}")

    def key(self) -> tuple:
        return (tuple(self.freqs.tolist()), self.band)


def build_grid(
    fs: float = 10.0,
    f_lo: float = 0.5,
    f_hi: float = 4.99,
    voices_per_octave: int = 16,
    band: tuple[float, float] = DEFAULT_BAND,
) -> FrequencyGrid:
    """Geometric frequency grid with the band endpoints inserted exactly.

    Frequencies are ``f_lo * 2**(k / voices_per_octave)`` up to ``f_hi``,
    merged with ``band`` = (f_min, f_max). Requires
    ``0 < f_lo < f_min < f_max < f_hi < fs/2``; raises BadBand otherwise.
    """
    f_min, f_max = band
    if not (0 < f_lo < f_min < f_max < f_hi < fs / 2):
        raise BadBand(
            f"need 0 < f_lo={f_lo} < f_min={f_min} < f_max={f_max} < f_hi={f_hi} < fs/2={fs / 2}"
        )
    n = int(np.floor(voices_per_octave * np.log2(f_hi / f_lo) * (1 + 1e-12))) + 1
    geo = f_lo * 2 ** (np.arange(n) / voices_per_octave)
    freqs = np.unique(np.concatenate([geo, [f_min, f_max]]))
    # collapse band endpoints that land within float dust of a geometric point
    dedup = [freqs[0]]
    for f in freqs[1:]:
        if f - dedup[-1] > 1e-9:
            dedup.append(f)
    return FrequencyGrid(freqs=np.array(dedup), band=(float(f_min), float(f_max)))


def _edge_resolution_ratio(mp: MorseParams, fraction: float = 0.3) -> float:
    """Frequency ratio r > 1 where the response falls to ``fraction`` of peak.

    Within a factor r of a tone the wavelet cannot tell in-band from
    out-of-band energy; rows closer to the band edge than this measure the
    edge itself rather than sub-band energy.
    """
    peak = morse_frequency_response(mp, mp.peak_omega)
    lo, hi = 1.0, 4.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if morse_frequency_response(mp, mp.peak_omega * mid) > fraction * peak:
            lo = mid
        else:
            hi = mid
    return hi


def detection_grid(
    fs: float = 10.0,
    band: tuple[float, float] = DEFAULT_BAND,
    mp: MorseParams | None = None,
    f_lo: float = 0.5,
    f_hi: float = 4.99,
    voices_per_octave: int = 16,
) -> FrequencyGrid:
    """Analysis grid for the walking ratio test.

    Same geometric ladder as `build_grid`, except that below-band rows inside
    the wavelet's resolution width of f_min are dropped: leakage there from a
    legitimate in-band step frequency would otherwise masquerade as
    sub-harmonic energy and veto slow walkers. Kept below-band rows still
    cover the stride (half-step) frequencies.
    """
    grid = build_grid(fs, f_lo, f_hi, voices_per_octave, band)
    guard = band[0] / _edge_resolution_ratio(mp or MorseParams())
    keep = (grid.freqs >= band[0]) | (grid.freqs <= guard)
    return FrequencyGrid(freqs=grid.freqs[keep], band=grid.band)


@dataclass
class Scalogram:
    """Magnitudes |C(f, tau)| of the transform, rows = frequencies."""

    freqs: np.ndarray
    times: np.ndarray
    coeffs: np.ndarray


# envelope fraction defining one wavelet support length (for padding)
_SUPPORT_FRACTION = 0.01

# digital band where the sampled response rolls off to zero, rad/sample
_ROLLOFF_START = 0.9 * np.pi
_ROLLOFF_END = np.pi


def nyquist_rolloff(w: np.ndarray) -> np.ndarray:
    """C^3 taper: 1 below 0.9*pi, 0 at/above pi, 7th-order smoothstep between.

    Applied to the sampled response so rows near the top of the grid neither
    alias past Nyquist nor respond to the mirror line of near-Nyquist tones.
    """
    w = np.asarray(w, dtype=float)
    out = np.ones_like(w)
    out[w >= _ROLLOFF_END] = 0.0
    mid = (w > _ROLLOFF_START) & (w < _ROLLOFF_END)
    x = (w[mid] - _ROLLOFF_START) / (_ROLLOFF_END - _ROLLOFF_START)
    out[mid] = 1.0 - (35 * x**4 - 84 * x**5 + 70 * x**6 - 20 * x**7)
    return out


class CwtPlan:
    """Precomputed transform machinery for one (grid, wavelet, fs) triple.

    ``scales[i]`` maps row i to samples: scale = peak_omega / (2*pi*f/fs), so
    the rescaled response peaks exactly at the row frequency. ``pad`` is one
    support length of the widest (lowest-frequency) wavelet, in samples.
    """

    def __init__(self, grid: FrequencyGrid, mp: MorseParams, fs: float = 10.0):
        self.grid = grid
        self.mp = mp
        self.fs = float(fs)
        self.scales = mp.peak_omega / (2.0 * np.pi * grid.freqs / fs)
        self.support_per_scale = _envelope_halfwidth(mp)
        self.pad = int(np.ceil(self.support_per_scale * self.scales.max()))

    def row_filters(self, n_fft: int) -> np.ndarray:
        """(n_rows, n_fft) real filters: sqrt(scale) * response(scale * w),
        rolled off at the top of the digital band."""
        w = 2.0 * np.pi * np.arange(n_fft) / n_fft
        resp = morse_frequency_response(self.mp, self.scales[:, None] * w[None, :])
        return np.sqrt(self.scales)[:, None] * resp * nyquist_rolloff(w)[None, :]

    def fft_length(self, n_extended: int) -> int:
        # 4*pad slack keeps circular wraparound of the kernel tails below
        # ~1e-8 of the largest coefficient at every retained position
        return next_fast_len(n_extended + 4 * self.pad)

    def magnitudes(self, extended: np.ndarray, trim: int | None = None) -> np.ndarray:
        """|coefficients| for ``extended[trim:-trim]``; the outer ``trim``
        samples per side are context (real neighbors or reflection)."""
        trim = self.pad if trim is None else trim
        n_ext = len(extended)
        m = self.fft_length(n_ext)
        spectrum = fft(extended, m)
        rows = ifft(spectrum[None, :] * self.row_filters(m), axis=1)
        return np.abs(rows[:, trim : n_ext - trim])


def _envelope_halfwidth(mp: MorseParams) -> float:
    """Half-width (samples per unit scale) where the time envelope is >= 1% of max."""
    s_ref, m = 8.0, 32768
    w = 2.0 * np.pi * np.arange(m) / m
    h = morse_frequency_response(mp, s_ref * w)
    env = np.abs(np.fft.fftshift(np.fft.ifft(h)))
    center = m // 2
    above = np.nonzero(env >= _SUPPORT_FRACTION * env.max())[0]
    half = max(center - above[0], above[-1] - center)
    return half / s_ref


_PLAN_CACHE: dict[tuple, CwtPlan] = {}


def get_plan(grid: FrequencyGrid, mp: MorseParams, fs: float = 10.0) -> CwtPlan:
    key = (grid.key(), mp.gamma, mp.p2, mp.norm_constant, fs)
    plan = _PLAN_CACHE.get(key)
    if plan is None:
        plan = _PLAN_CACHE[key] = CwtPlan(grid, mp, fs)
    return plan


def extend_for_transform(
    values: np.ndarray, start: int, stop: int, pad: int
) -> np.ndarray:
    """Slice [start, stop) plus ``pad`` context samples per side.

    Context comes from the real neighboring samples where they exist and from
    reflection where the slice touches the array ends, so transforming a tile
    of a long signal matches transforming the whole signal at interior points.
    """
    lo = max(start - pad, 0)
    hi = min(stop + pad, len(values))
    chunk = np.asarray(values, dtype=float)[lo:hi]
    return np.pad(chunk, (pad - (start - lo), pad - (hi - stop)), mode="reflect")


def transform(
    vm_segment: np.ndarray,
    grid: FrequencyGrid,
    mp: MorseParams | None = None,
    fs: float = 10.0,
) -> Scalogram:
    """Scalogram of a vector-magnitude segment on the grid's frequencies.

    The segment is reflect-padded by one wavelet support length per side and
    trimmed after the transform. Raises TooShort below 10 samples.
    """
    values = np.asarray(vm_segment, dtype=float)
    if len(values) < 10:
        raise TooShort("transform needs at least 10 samples")
    plan = get_plan(grid, mp or MorseParams(), fs)
    mags = plan.magnitudes(extend_for_transform(values, 0, len(values), plan.pad))
    return Scalogram(freqs=grid.freqs, times=np.arange(len(values)), coeffs=mags)
