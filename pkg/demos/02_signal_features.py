"""Look inside the detector: amplitudes and time-frequency structure.

Transforms one walking bout and one running-like bout, then prints the
per-second features the classification rule actually consumes: peak-to-peak
amplitude, the dominant in-band frequency, and the band maxima M_in / M_lo /
M_hi that feed `alpha * M_in > M_lo and beta * M_in > M_hi`.
"""

import numpy as np

import walkrec as w

fs = 10.0
t = np.arange(30 * int(fs)) / fs

signals = {
    "walk 1.8 Hz, 0.5 g": 0.5 * np.sin(2 * np.pi * 1.8 * t)
    + 0.1 * np.sin(np.pi * 1.8 * t),
    "run-like 3.0 Hz, 0.8 g": 0.8 * np.sin(2 * np.pi * 3.0 * t),
}

params = w.params_for_profile("smartphone")
for name, values in signals.items():
    vm = w.VmSeries(fs=fs, values=values)
    features = w.dump_features(vm)
    mid = features.iloc[10:20].mean(numeric_only=True)
    passes_alpha = params.alpha * mid.m_in > mid.m_lo
    passes_beta = params.beta * mid.m_in > mid.m_hi
    print(name)
    print(f"  p2p {mid.p2p_g:.2f} g | dominant {mid.dominant_freq_hz:.2f} Hz")
    print(f"  M_in {mid.m_in:.3f}  M_lo {mid.m_lo:.3f}  M_hi {mid.m_hi:.3f}")
    print(f"  alpha test {'pass' if passes_alpha else 'fail'}, "
          f"beta test {'pass' if passes_beta else 'fail'}")
    print()

# the scalogram itself: where does a 1.8 Hz tone concentrate?
grid = w.build_grid()
scal = w.transform(signals["walk 1.8 Hz, 0.5 g"], grid)
profile = scal.coeffs[:, 140:160].max(axis=1)
top = np.argsort(profile)[-5:][::-1]
print("strongest rows for the walking signal (frequency: relative weight):")
for k in top:
    bar = "#" * int(40 * profile[k] / profile.max())
    print(f"  {grid.freqs[k]:5.2f} Hz  {bar}")
