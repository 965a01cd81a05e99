"""Independent reference implementations used as test oracles.

Everything here is deliberately naive (plain Python loops, scipy building
blocks) and shares no code with the package's evaluation paths.
"""

from __future__ import annotations

import numpy as np
from scipy.stats import norm


def step_cdf_direct(samples, z) -> float:
    return sum(1 for s in samples if s <= z) / len(samples)


def midrank_cdf_direct(samples, z) -> float:
    below = sum(1 for s in samples if s < z)
    ties = sum(1 for s in samples if s == z)
    return (below + 0.5 * ties) / len(samples)


def mv_step_direct(scores, labels) -> float:
    """Exhaustive double-sum of the index with <= step CDFs."""
    scores = list(map(float, scores))
    labels = list(labels)
    n = len(scores)
    classes = sorted(set(labels))
    total = 0.0
    for r in classes:
        members = [s for s, l in zip(scores, labels) if l == r]
        p_r = len(members) / n
        for z in scores:
            f_all = step_cdf_direct(scores, z)
            f_r = step_cdf_direct(members, z)
            total += p_r * (f_all - f_r) ** 2
    return total / n


def mv_midrank_direct(scores, labels) -> float:
    """Exhaustive double-sum with mid-rank CDFs: the exact h -> 0 limit of
    the kernel-smoothed index (each sample contributes 1/2 at itself)."""
    scores = list(map(float, scores))
    labels = list(labels)
    n = len(scores)
    classes = sorted(set(labels))
    total = 0.0
    for r in classes:
        members = [s for s, l in zip(scores, labels) if l == r]
        p_r = len(members) / n
        for z in scores:
            f_all = midrank_cdf_direct(scores, z)
            f_r = midrank_cdf_direct(members, z)
            total += p_r * (f_all - f_r) ** 2
    return total / n


def mv_smoothed_direct(scores, labels, h, family="gaussian") -> float:
    """Exhaustive double-sum with kernel-smoothed CDFs."""

    def ik(t):
        if family == "gaussian":
            return float(norm.cdf(t))
        if t <= -1.0:
            return 0.0
        if t >= 1.0:
            return 1.0
        return 0.75 * (t - t**3 / 3.0) + 0.5

    scores = list(map(float, scores))
    labels = list(labels)
    n = len(scores)
    classes = sorted(set(labels))
    total = 0.0
    for r in classes:
        members = [s for s, l in zip(scores, labels) if l == r]
        p_r = len(members) / n
        for z in scores:
            f_all = sum(ik((z - s) / h) for s in scores) / n
            f_r = sum(ik((z - s) / h) for s in members) / len(members)
            total += p_r * (f_all - f_r) ** 2
    return total / n


def five_point_gradient(fn, beta, base_step) -> np.ndarray:
    """Fourth-order central stencil, the oracle for the two-point gradient."""
    beta = np.asarray(beta, dtype=np.float64)
    grad = np.empty(beta.size)
    for j in range(beta.size):
        step = base_step * max(1.0, abs(beta[j]))
        unit = np.zeros(beta.size)
        unit[j] = 1.0
        grad[j] = (
            -fn(beta + 2 * step * unit)
            + 8.0 * fn(beta + step * unit)
            - 8.0 * fn(beta - step * unit)
            + fn(beta - 2 * step * unit)
        ) / (12.0 * step)
    return grad


def gauss_hermite_population_mv(delta: float, p1: float, order: int = 150) -> float:
    """Population two-class Gaussian index by Gauss-Hermite quadrature."""
    nodes, weights = np.polynomial.hermite_e.hermegauss(order)
    weights = weights / np.sqrt(2.0 * np.pi)
    total = 0.0
    for prob, shift in ((p1, 2.0 * delta), (1.0 - p1, -2.0 * delta)):
        gap = norm.cdf(nodes) - norm.cdf(nodes + shift)
        total += prob * float(np.sum(weights * gap**2))
    return p1 * (1.0 - p1) * total


def best_direction_by_angle_grid(eval_fn, grid_size: int = 2000) -> np.ndarray:
    """Exhaustive search over directions in the plane (p = 2 only)."""
    best_value, best_theta = -1.0, 0.0
    for theta in np.linspace(0.0, np.pi, grid_size, endpoint=False):
        beta = np.array([np.cos(theta), np.sin(theta)])
        value = eval_fn(beta)
        if value > best_value:
            best_value, best_theta = value, theta
    return np.array([np.cos(best_theta), np.sin(best_theta)])


def random_tiny_dataset(gen: np.random.Generator):
    """Small score/label pair with deliberate ties for oracle-equivalence tests."""
    n = int(gen.integers(2, 7))
    # Draw from a small value set so exact ties occur often.
    scores = gen.choice(np.array([-1.0, -0.5, 0.0, 0.5, 1.0, 2.0]), size=n)
    labels = gen.integers(0, 2, size=n)
    labels[0] = 0
    labels[-1] = 1
    return scores, labels
