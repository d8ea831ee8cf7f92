"""Independent reference implementations used to check the library.

These deliberately avoid the library's computational paths: the transform
oracle evaluates the wavelet integral by brute-force time-domain summation
against a densely sampled kernel, the regression oracle minimizes squared
error iteratively, and window statistics are computed with plain loops.
"""

from __future__ import annotations

import numpy as np
from scipy.fft import next_fast_len
from scipy.optimize import minimize

from walkrec.cwt import CwtPlan, extend_for_transform, morse_frequency_response, nyquist_rolloff


def cwt_direct(segment: np.ndarray, plan: CwtPlan) -> np.ndarray:
    """|coefficients| by direct time-domain summation, O(N^2) per row.

    Pads the segment exactly like the production transform, then evaluates
    the convolution sum per scale against a wavelet kernel sampled from a
    much denser inverse transform of the frequency response. A doubling
    check asserts the kernel discretization has converged.
    """
    segment = np.asarray(segment, dtype=float)
    n = len(segment)
    pad = plan.pad
    ext = extend_for_transform(segment, 0, n, pad)
    length = len(ext)
    out = np.empty((len(plan.scales), n))
    for row, scale in enumerate(plan.scales):
        kernel = _dense_kernel(plan, scale, length, oversample=8)
        check = _dense_kernel(plan, scale, length, oversample=16)
        assert np.max(np.abs(kernel - check)) < 1e-10, "kernel not converged"
        full = np.convolve(ext, kernel)  # numpy convolve = direct summation
        coeffs = full[length - 1 : 2 * length - 1]
        out[row] = np.abs(coeffs[pad : pad + n])
    return out


def _dense_kernel(plan: CwtPlan, scale: float, length: int, oversample: int) -> np.ndarray:
    """Wavelet kernel at integer lags -(L-1)..(L-1) from a dense response grid."""
    m = next_fast_len(oversample * (length + 2 * plan.pad))
    w = 2.0 * np.pi * np.arange(m) / m
    h = np.sqrt(scale) * morse_frequency_response(plan.mp, scale * w) * nyquist_rolloff(w)
    circ = np.fft.ifft(h)
    lags = np.arange(-(length - 1), length)
    return circ[lags % m]


def window_minmax_p2p(values: np.ndarray) -> list[float]:
    """Per-window peak-to-peak by explicit loops over each second."""
    out = []
    for start in range(0, len(values) - len(values) % 10, 10):
        block = [float(v) for v in values[start : start + 10]]
        out.append(max(block) - min(block))
    return out


def brute_force_youden(points):
    """Argmax of tpr - fpr over (candidate, fpr, tpr) by exhaustive scan."""
    best = None
    best_j = -np.inf
    for cand, fpr, tpr in points:
        j = tpr - fpr
        if j > best_j or (j == best_j and cand < best):
            best, best_j = cand, j
    return best


def least_squares_iterative(design: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Minimize squared error with BFGS (no linear-algebra solve)."""
    design = np.asarray(design, dtype=float)
    y = np.asarray(y, dtype=float)

    def loss(beta):
        r = design @ beta - y
        return float(r @ r)

    def grad(beta):
        return 2.0 * design.T @ (design @ beta - y)

    result = minimize(
        loss, np.zeros(design.shape[1]), jac=grad, method="BFGS",
        options={"gtol": 1e-12, "maxiter": 10_000},
    )
    return result.x


def rotation_matrix(rng: np.random.Generator) -> np.ndarray:
    """Random orthonormal 3x3 rotation (det +1) via QR."""
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q *= np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] *= -1
    return q
