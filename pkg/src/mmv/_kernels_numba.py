"""Numba-jitted implementations of the hot loops.

Semantics match :mod:`mmv._kernels_numpy` (same signatures, same kernel ids);
values agree to floating-point accumulation order. Kernels are compiled
nogil so cross-validation repetitions can run in Python threads, and all
accumulation orders are fixed so results are identical for any thread count.

Importing this module requires numba; :mod:`mmv.backends` falls back to the
numpy twin when the import fails or MMV_DISABLE_NUMBA is set.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

GAUSSIAN = 0
EPANECHNIKOV = 1

FD_RELATIVE_STEP = float(np.finfo(np.float64).eps) ** (1.0 / 3.0)

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


@njit(cache=True, nogil=True)
def _ikernel(t: float, kernel_id: int) -> float:
    if kernel_id == GAUSSIAN:
        return 0.5 * (1.0 + math.erf(t * _INV_SQRT2))
    if t <= -1.0:
        return 0.0
    if t >= 1.0:
        return 1.0
    return 0.75 * (t - t * t * t / 3.0) + 0.5


@njit(cache=True, nogil=True)
def mv_step(scores, labels, n_classes):
    n = scores.size
    order = np.argsort(scores, kind="mergesort")
    sorted_all = np.empty(n)
    for k in range(n):
        sorted_all[k] = scores[order[k]]
    counts = np.zeros(n_classes, dtype=np.int64)
    for i in range(n):
        counts[labels[i]] += 1
    offsets = np.zeros(n_classes + 1, dtype=np.int64)
    for r in range(n_classes):
        offsets[r + 1] = offsets[r] + counts[r]
    # One pass over the sorted order fills each class segment already sorted.
    fill = offsets[:n_classes].copy()
    class_sorted = np.empty(n)
    for k in range(n):
        idx = order[k]
        r = labels[idx]
        class_sorted[fill[r]] = scores[idx]
        fill[r] += 1
    acc = 0.0
    for i in range(n):
        z = scores[i]
        f_all = np.searchsorted(sorted_all, z, side="right") / n
        for r in range(n_classes):
            seg = class_sorted[offsets[r] : offsets[r + 1]]
            f_r = np.searchsorted(seg, z, side="right") / counts[r]
            d = f_all - f_r
            acc += (counts[r] / n) * d * d
    return acc / n


@njit(cache=True, nogil=True)
def mv_smoothed(scores, labels, n_classes, h, kernel_id):
    n = scores.size
    counts = np.zeros(n_classes, dtype=np.int64)
    for i in range(n):
        counts[labels[i]] += 1
    # total[i] accumulates sum_j iK((z_i - z_j)/h); class_sums[r, i] the
    # class-restricted sums. The j == i term is iK(0) = 1/2 for symmetric
    # kernels, and iK(-t) = 1 - iK(t) gives the (j, i) entry for free.
    total = np.full(n, 0.5)
    class_sums = np.zeros((n_classes, n))
    for i in range(n):
        class_sums[labels[i], i] = 0.5
    for i in range(n):
        zi = scores[i]
        li = labels[i]
        for j in range(i):
            w = _ikernel((zi - scores[j]) / h, kernel_id)
            total[i] += w
            class_sums[labels[j], i] += w
            wr = 1.0 - w
            total[j] += wr
            class_sums[li, j] += wr
    acc = 0.0
    for i in range(n):
        f_all = total[i] / n
        for r in range(n_classes):
            d = f_all - class_sums[r, i] / counts[r]
            acc += (counts[r] / n) * d * d
    return acc / n


@njit(cache=True, nogil=True)
def _project(features, beta, out):
    # Hand-rolled matvec keeps the result independent of BLAS threading.
    n, q = features.shape
    for i in range(n):
        s = 0.0
        for j in range(q):
            s += features[i, j] * beta[j]
        out[i] = s


@njit(cache=True, nogil=True)
def mv_gradient_fd(features, labels, n_classes, beta, h, kernel_id, rel_step):
    q = beta.size
    n = features.shape[0]
    grad = np.empty(q)
    shifted = beta.copy()
    scores = np.empty(n)
    for j in range(q):
        delta = rel_step * max(1.0, abs(beta[j]))
        shifted[j] = beta[j] + delta
        _project(features, shifted, scores)
        hi = mv_smoothed(scores, labels, n_classes, h, kernel_id)
        shifted[j] = beta[j] - delta
        _project(features, shifted, scores)
        lo = mv_smoothed(scores, labels, n_classes, h, kernel_id)
        shifted[j] = beta[j]
        grad[j] = (hi - lo) / (2.0 * delta)
    return grad
