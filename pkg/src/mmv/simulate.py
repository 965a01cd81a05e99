"""Seeded generators for the benchmark simulation designs.

Four designs share the coefficient vectors b1 = (1,1,1,1,0,...) and
b2 = (1,-1,1,-1,0,...) and the AR covariance psi_ij = rho^|i-j|:

  I.   x = b1 * y + noise, y = +-1 balanced, noise ~ N(0, psi)
  II.  y = 1{sigmoid(-b1.x) >= 1/2}  (equivalently b1.x <= 0), x ~ N(0, psi)
  III. y = 1{b1.x / (0.5 + (b2.x + 1.5)^2) + 0.2 eps >= 0}
  IV.  y = 1{(b1.x)^2 + (b2.x)^2 + 0.2 eps >= 1}

Generators are pure functions of their stream, so identical specs reproduce
identical datasets. The label rules are exposed separately so tests can
drive them with pinned noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset, validate_dataset
from .errors import OddN
from .rng import RngStream

MODELS = ("I", "II", "III", "IV")


@dataclass(frozen=True)
class ModelSpec:
    """A simulation design with its size and seed."""

    model: str
    n: int
    p: int
    seed: int = 0

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}; expected one of {MODELS}")
        if self.p < 4:
            raise ValueError("p must be at least 4 (coefficients touch coordinates 1-4)")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.model == "I" and self.n % 2 != 0:
            raise OddN("model I draws balanced labels and needs an even n")


def beta1(p: int) -> np.ndarray:
    b = np.zeros(p)
    b[:4] = 1.0
    return b


def beta2(p: int) -> np.ndarray:
    b = np.zeros(p)
    b[:4] = (1.0, -1.0, 1.0, -1.0)
    return b


def ar_covariance(p: int, rho: float) -> np.ndarray:
    """AR-structured covariance with entry (i, j) = rho^|i-j|."""
    if not 0.0 < rho < 1.0:
        raise ValueError("rho must lie strictly between 0 and 1")
    idx = np.arange(p)
    return rho ** np.abs(idx[:, None] - idx[None, :])


def _ar_factor(p: int) -> np.ndarray:
    return np.linalg.cholesky(ar_covariance(p, 0.5))


def _correlated_normal(gen: np.random.Generator, n: int, p: int, factor: np.ndarray):
    return gen.standard_normal((n, p)) @ factor.T


def gen_model_i(n: int, p: int, rng: RngStream, noise=None) -> Dataset:
    """Location model: first n/2 labels +1 then n/2 labels -1."""
    if n % 2 != 0:
        raise OddN("model I needs an even n for balanced labels")
    y = np.concatenate([np.ones(n // 2), -np.ones(n // 2)])
    if noise is None:
        noise = _correlated_normal(rng.generator(), n, p, _ar_factor(p))
    x = y[:, None] * beta1(p) + noise
    return validate_dataset(x, y.astype(np.int64))


def model_ii_labels(x: np.ndarray) -> np.ndarray:
    # 1/(1 + exp(b1.x)) >= 1/2 is algebraically b1.x <= 0; the direct form
    # overflows exp for large scores.
    return (x @ beta1(x.shape[1]) <= 0.0).astype(np.int64)


def gen_model_ii(n: int, p: int, rng: RngStream, psi: np.ndarray | None = None) -> Dataset:
    """Single-index logistic boundary; ``psi`` overrides the AR covariance."""
    factor = _ar_factor(p) if psi is None else np.linalg.cholesky(psi)
    x = _correlated_normal(rng.generator(), n, p, factor)
    return validate_dataset(x, model_ii_labels(x))


def model_iii_labels(x: np.ndarray, eps: np.ndarray) -> np.ndarray:
    p = x.shape[1]
    ratio = (x @ beta1(p)) / (0.5 + (x @ beta2(p) + 1.5) ** 2)
    return (ratio + 0.2 * eps >= 0.0).astype(np.int64)


def gen_model_iii(n: int, p: int, rng: RngStream, noise=None) -> Dataset:
    gen = rng.generator()
    x = _correlated_normal(gen, n, p, _ar_factor(p))
    eps = gen.standard_normal(n) if noise is None else np.asarray(noise, dtype=np.float64)
    return validate_dataset(x, model_iii_labels(x, eps))


def model_iv_labels(x: np.ndarray, eps: np.ndarray) -> np.ndarray:
    p = x.shape[1]
    radius = (x @ beta1(p)) ** 2 + (x @ beta2(p)) ** 2
    return (radius + 0.2 * eps >= 1.0).astype(np.int64)


def gen_model_iv(n: int, p: int, rng: RngStream, noise=None) -> Dataset:
    gen = rng.generator()
    x = _correlated_normal(gen, n, p, _ar_factor(p))
    eps = gen.standard_normal(n) if noise is None else np.asarray(noise, dtype=np.float64)
    return validate_dataset(x, model_iv_labels(x, eps))


def gen_gaussian_two_class(
    n: int, mu: np.ndarray, sigma: np.ndarray, p1: float, rng: RngStream
) -> Dataset:
    """Sample the two-class Gaussian location model x | y ~ N(y * mu, sigma)."""
    mu = np.asarray(mu, dtype=np.float64).ravel()
    gen = rng.generator()
    y = np.where(gen.random(n) < p1, 1, -1)
    x = y[:, None] * mu + _correlated_normal(gen, n, mu.size, np.linalg.cholesky(sigma))
    return validate_dataset(x, y.astype(np.int64))


_GENERATORS = {
    "I": gen_model_i,
    "II": gen_model_ii,
    "III": gen_model_iii,
    "IV": gen_model_iv,
}


def generate(spec: ModelSpec, rng: RngStream | None = None) -> Dataset:
    """Instantiate a spec; the optional stream overrides the spec's seed."""
    stream = RngStream(spec.seed).child("model", spec.model) if rng is None else rng
    return _GENERATORS[spec.model](spec.n, spec.p, stream)
