"""Univariate CDF estimators: empirical step functions and kernel-smoothed
integrals, plus the rule-of-thumb bandwidth.

The smoothed estimator is F_h(z) = n^-1 sum_i W((z - Z_i)/h) where W is the
integral of the kernel; for the Gaussian family W is the standard normal CDF,
so no quadrature is needed. One bandwidth is shared by the unconditional and
all per-class estimators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels_numpy as _np_kernels
from .data import dense_labels
from .errors import DegenerateScores, EmptyClass, EmptySample, NonPositiveBandwidth

GAUSSIAN = "gaussian"
EPANECHNIKOV = "epanechnikov"
_KERNEL_IDS = {GAUSSIAN: _np_kernels.GAUSSIAN, EPANECHNIKOV: _np_kernels.EPANECHNIKOV}


@dataclass(frozen=True)
class KernelSpec:
    """Symmetric, unit-mass smoothing kernel with a fixed bandwidth."""

    family: str = GAUSSIAN
    bandwidth: float = 1.0

    def __post_init__(self):
        if self.family not in _KERNEL_IDS:
            raise ValueError(f"unknown kernel family {self.family!r}")
        if not (self.bandwidth > 0.0):
            raise NonPositiveBandwidth(f"bandwidth must be > 0, got {self.bandwidth}")

    @property
    def kernel_id(self) -> int:
        return _KERNEL_IDS[self.family]


@dataclass(frozen=True)
class CdfMode:
    """Estimator choice: empirical step function or kernel-smoothed."""

    kind: str = "step"
    kernel: KernelSpec | None = None

    def __post_init__(self):
        if self.kind not in ("step", "smoothed"):
            raise ValueError(f"unknown cdf mode {self.kind!r}")
        if self.kind == "smoothed" and self.kernel is None:
            raise ValueError("smoothed mode requires a KernelSpec")

    @classmethod
    def step(cls) -> "CdfMode":
        return cls("step")

    @classmethod
    def smoothed(cls, kernel: KernelSpec) -> "CdfMode":
        return cls("smoothed", kernel)


def _as_scores(samples) -> np.ndarray:
    z = np.ascontiguousarray(np.asarray(samples, dtype=np.float64)).ravel()
    if z.size == 0:
        raise EmptySample("empty sample")
    return z


def step_cdf(samples, z):
    """Fraction of samples <= z (right-continuous); z may be scalar or array."""
    s = np.sort(_as_scores(samples), kind="mergesort")
    out = np.searchsorted(s, z, side="right") / s.size
    return float(out) if np.isscalar(z) else out


def smoothed_cdf(samples, z, kernel: KernelSpec):
    """Kernel-smoothed CDF at z; monotone in z with limits 0 and 1."""
    s = _as_scores(samples)
    t = (np.asarray(z, dtype=np.float64)[..., None] - s) / kernel.bandwidth
    out = _np_kernels.integrated_kernel(t, kernel.kernel_id).mean(axis=-1)
    return float(out) if np.isscalar(z) else out


def per_class_cdfs(scores, labels, z, mode: CdfMode, n_classes: int | None = None):
    """Unconditional and per-class CDF estimates at a scalar z.

    The same mode (and bandwidth, when smoothed) is used for the
    unconditional estimate and every class, so the mixture identity
    sum_r (n_r/n) F_r(z) = F(z) holds by construction.
    """
    s = _as_scores(scores)
    dense, classes = dense_labels(labels)
    r_count = len(classes) if n_classes is None else n_classes
    if len(classes) > r_count:
        raise ValueError(
            f"labels contain {len(classes)} classes, more than n_classes={r_count}"
        )
    counts = np.bincount(dense, minlength=r_count)
    if np.any(counts == 0):
        missing = np.nonzero(counts == 0)[0]
        raise EmptyClass(f"no observations for class id(s) {missing.tolist()}")
    if mode.kind == "step":
        estimate = lambda sample: step_cdf(sample, float(z))
    else:
        estimate = lambda sample: smoothed_cdf(sample, float(z), mode.kernel)
    f_all = estimate(s)
    f_classes = np.array([estimate(s[dense == r]) for r in range(r_count)])
    return f_all, f_classes


def bandwidth_rule(scores) -> float:
    """Rule-of-thumb bandwidth: 3 * sd(scores) * n^(-1/3).

    Uses the ddof=1 sample standard deviation of the projected scores.
    """
    s = _as_scores(scores)
    if s.size < 2:
        raise EmptySample("bandwidth rule needs at least two scores")
    sd = float(np.std(s, ddof=1))
    if sd == 0.0:
        raise DegenerateScores("scores have zero variance")
    return 3.0 * sd * s.size ** (-1.0 / 3.0)
