import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

import walkrec as w


@pytest.fixture(scope="session")
def grid():
    return w.build_grid()


@pytest.fixture(scope="session")
def morse():
    return w.MorseParams()


@pytest.fixture(scope="session")
def plan(grid, morse):
    from walkrec.cwt import get_plan

    return get_plan(grid, morse, 10.0)


def tone_vm(freq_hz, amplitude=0.5, seconds=60, fs=10.0):
    t = np.arange(int(seconds * fs)) / fs
    return w.VmSeries(fs=fs, values=amplitude * np.sin(2 * np.pi * freq_hz * t))


def walk_spec(duration_s=60, step=1.8, amp=0.5, sub=0.0, high=0.0, noise=0.0,
              lead_s=0, trail_s=0, seed=0):
    segs = []
    if lead_s:
        segs.append(w.Segment(kind="stationary", duration_s=lead_s, noise_sigma_g=0.0))
    segs.append(
        w.Segment(kind="walk", duration_s=duration_s, step_freq_hz=step, amplitude_g=amp,
                  subharmonic_ratio=sub, harmonic_ratio=high, noise_sigma_g=noise)
    )
    if trail_s:
        segs.append(w.Segment(kind="stationary", duration_s=trail_s, noise_sigma_g=0.0))
    return w.SynthSpec(segments=tuple(segs), seed=seed)
