"""Seeded synthetic accelerometer recordings with per-second ground truth.

Walking is modelled as gravity plus an in-band sinusoid at the step
frequency, an optional sub-harmonic at half the step frequency (limb swing)
and an optional higher harmonic at twice the step frequency (heel strikes),
plus white gaussian noise. The two horizontal axes carry phase-shifted
fractions of the step oscillation, as a body-worn device would see, so all
three axes move during a walk. No biomechanical gait model is attempted: the
detector only consumes amplitude and spectral structure.

All randomness comes from one ``numpy.random.default_rng(seed)`` stream
(PCG64), consumed segment by segment, so a spec and seed reproduce the same
recording bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadSpec
from .ingest import RecordingMeta, UniformRecording
from .preprocess import SAMPLES_PER_WINDOW

FS = 10.0

KINDS = ("walk", "stationary", "tone", "noise")

_DEFAULT_LABELS = {"walk": "walking", "stationary": "standing", "tone": "tone", "noise": "noise"}


@dataclass(frozen=True)
class Segment:
    """One homogeneous stretch of a synthetic recording."""

    kind: str
    duration_s: float
    step_freq_hz: float = 0.0  # walk and tone kinds
    amplitude_g: float = 0.0
    subharmonic_ratio: float = 0.0
    harmonic_ratio: float = 0.0
    noise_sigma_g: float = 0.0
    label: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise BadSpec(f"unknown segment kind {self.kind!r}")
        if self.duration_s <= 0:
            raise BadSpec("duration_s must be positive")
        if self.amplitude_g < 0 or self.noise_sigma_g < 0:
            raise BadSpec("amplitude and noise sigma must be non-negative")
        if not (0.0 <= self.subharmonic_ratio <= 1.0 and 0.0 <= self.harmonic_ratio <= 1.0):
            raise BadSpec("harmonic ratios must lie in [0, 1]")
        if self.kind == "walk" and not (0.5 < self.step_freq_hz < 4.5):
            raise BadSpec("walk step frequency must lie in (0.5, 4.5) Hz")
        if self.kind == "tone" and not (0.0 < self.step_freq_hz < FS / 2):
            raise BadSpec("tone frequency must lie in (0, 5) Hz")


@dataclass(frozen=True)
class SynthSpec:
    segments: tuple[Segment, ...]
    seed: int = 0

    def __post_init__(self):
        if not self.segments:
            raise BadSpec("spec needs at least one segment")
        object.__setattr__(self, "segments", tuple(self.segments))


def generate(
    spec: SynthSpec, meta: RecordingMeta | None = None
) -> tuple[UniformRecording, np.ndarray]:
    """Render a spec into a labelled 10 Hz recording plus ground truth.

    Ground truth marks one boolean per full second: True where the whole
    window lies inside walk segments. Segment boundaries are snapped to whole
    samples (``round(duration_s * 10)``).
    """
    rng = np.random.default_rng(spec.seed)
    parts = []
    labels = []
    walk_mask = []
    for seg in spec.segments:
        n = int(round(seg.duration_s * FS))
        if n == 0:
            raise BadSpec(f"segment too short to hold a sample: {seg}")
        t = np.arange(n) / FS
        xyz = rng.normal(0.0, seg.noise_sigma_g, size=(n, 3))
        xyz[:, 2] += 1.0
        if seg.kind == "walk":
            a = seg.amplitude_g
            f = seg.step_freq_hz
            xyz[:, 0] += 0.4 * a * np.sin(2 * np.pi * f * t + 1.0)
            xyz[:, 1] += 0.3 * a * np.sin(2 * np.pi * f * t + 2.0)
            xyz[:, 2] += (
                a * np.sin(2 * np.pi * f * t)
                + a * seg.subharmonic_ratio * np.sin(np.pi * f * t)
                + a * seg.harmonic_ratio * np.sin(4 * np.pi * f * t)
            )
        elif seg.kind == "tone":
            xyz[:, 2] += seg.amplitude_g * np.sin(2 * np.pi * seg.step_freq_hz * t)
        parts.append(xyz)
        labels.extend([seg.label or _DEFAULT_LABELS[seg.kind]] * n)
        walk_mask.append(np.full(n, seg.kind == "walk"))

    samples = np.concatenate(parts)
    walk = np.concatenate(walk_mask)
    n_win = len(samples) // SAMPLES_PER_WINDOW
    truth = walk[: n_win * SAMPLES_PER_WINDOW].reshape(n_win, SAMPLES_PER_WINDOW).all(axis=1)
    rec = UniformRecording(
        fs=FS, start_time=0.0, samples=samples,
        labels=np.array(labels, dtype=object), meta=meta or RecordingMeta(),
    )
    return rec, truth


def spec_from_dict(payload: dict) -> SynthSpec:
    """Build a SynthSpec from a parsed JSON object ({"seed": .., "segments": [..]})."""
    if not isinstance(payload, dict) or "segments" not in payload:
        raise BadSpec("spec must be an object with a 'segments' list")
    segs = []
    for i, raw in enumerate(payload["segments"]):
        if not isinstance(raw, dict) or "kind" not in raw or "duration_s" not in raw:
            raise BadSpec(f"segment {i} must be an object with 'kind' and 'duration_s'")
        known = {f.name for f in Segment.__dataclass_fields__.values()}
        extra = set(raw) - known
        if extra:
            raise BadSpec(f"segment {i} has unknown fields {sorted(extra)}")
        segs.append(Segment(**raw))
    return SynthSpec(segments=tuple(segs), seed=int(payload.get("seed", 0)))
