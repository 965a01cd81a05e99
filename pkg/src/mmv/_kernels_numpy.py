"""Vectorized numpy implementations of the hot loops.

This is the fallback backend (see :mod:`mmv.backends`) and the baseline the
numba twin in :mod:`mmv._kernels_numba` is checked and benchmarked against.
All functions assume pre-validated inputs: float64 contiguous scores/features,
dense int64 labels covering 0..n_classes-1, positive bandwidth.

Kernel families are identified by integer ids so both backends share one
calling convention.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtr

GAUSSIAN = 0
EPANECHNIKOV = 1

# Central-difference step scale: cube root of double-precision epsilon.
FD_RELATIVE_STEP = float(np.finfo(np.float64).eps) ** (1.0 / 3.0)

# Cap on scratch matrix entries per block of the smoothed evaluation.
_BLOCK_ENTRIES = 4_000_000


def integrated_kernel(t: np.ndarray, kernel_id: int) -> np.ndarray:
    """Integral of the kernel from -inf to t (a CDF on the same scale)."""
    if kernel_id == GAUSSIAN:
        return ndtr(t)
    u = np.clip(t, -1.0, 1.0)
    return 0.75 * (u - u**3 / 3.0) + 0.5


def mv_step(scores: np.ndarray, labels: np.ndarray, n_classes: int) -> float:
    """Mean-variance index with empirical step CDFs, O(n log n + nR log n)."""
    n = scores.size
    sorted_all = np.sort(scores, kind="mergesort")
    f_all = np.searchsorted(sorted_all, scores, side="right") / n
    acc = 0.0
    for r in range(n_classes):
        cls = np.sort(scores[labels == r], kind="mergesort")
        f_r = np.searchsorted(cls, scores, side="right") / cls.size
        acc += (cls.size / n) * float(np.sum((f_all - f_r) ** 2))
    return acc / n


def mv_smoothed(
    scores: np.ndarray, labels: np.ndarray, n_classes: int, h: float, kernel_id: int
) -> float:
    """Mean-variance index with kernel-smoothed CDFs, evaluated at the scores."""
    n = scores.size
    counts = np.bincount(labels, minlength=n_classes).astype(np.float64)
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), labels] = 1.0
    weights = counts / n
    block = max(1, _BLOCK_ENTRIES // n)
    acc = 0.0
    for start in range(0, n, block):
        t = (scores[start : start + block, None] - scores[None, :]) / h
        w = integrated_kernel(t, kernel_id)
        f_all = w.sum(axis=1) / n
        f_cls = (w @ onehot) / counts
        diff = f_all[:, None] - f_cls
        acc += float(np.sum(diff * diff * weights))
    return acc / n


def mv_gradient_fd(
    features: np.ndarray,
    labels: np.ndarray,
    n_classes: int,
    beta: np.ndarray,
    h: float,
    kernel_id: int,
    rel_step: float = FD_RELATIVE_STEP,
) -> np.ndarray:
    """Central finite-difference gradient of the smoothed index in beta.

    The bandwidth is held fixed across all perturbed evaluations; the
    per-coordinate step is rel_step * max(1, |beta_j|).
    """
    q = beta.size
    grad = np.empty(q)
    for j in range(q):
        delta = rel_step * max(1.0, abs(beta[j]))
        up = beta.copy()
        up[j] += delta
        down = beta.copy()
        down[j] -= delta
        hi = mv_smoothed(features @ up, labels, n_classes, h, kernel_id)
        lo = mv_smoothed(features @ down, labels, n_classes, h, kernel_id)
        grad[j] = (hi - lo) / (2.0 * delta)
    return grad
