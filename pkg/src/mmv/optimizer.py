"""Sequential extraction of index-maximizing directions.

Each direction maximizes the smoothed mean-variance index of the projected
scores over the unit sphere intersected with the orthogonal complement of the
directions already found. The orthogonality constraints are eliminated by
reparametrizing in an orthonormal basis of the complement, so every iterate
is feasible by construction; the sphere constraint is kept by renormalizing
after each ascent step.

Nonconvexity is handled by multi-start: a moment-based seed (the ridge-
regularized within-data analogue of the optimal linear discriminant
direction) plus uniform random unit vectors in the feasible subspace.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space

from .cdf import bandwidth_rule
from .data import Dataset, DirectionBasis
from .errors import InfeasibleSubspace, RankDeficientPrev, StepModeGradient
from .mvindex import MvConfig, mv_empirical, mv_gradient
from .rng import RngStream

_MAX_BACKTRACKS = 60


@dataclass(frozen=True)
class OptimizerConfig:
    """Multi-start projected gradient ascent settings.

    ``d`` is the number of directions requested; extraction stops early when
    an achieved index value falls below ``mv_floor`` (the finite-sample
    reading of "the index reached zero").
    """

    d: int = 1
    restarts: int = 10
    max_iters: int = 200
    step_init: float = 1.0
    step_shrink: float = 0.5
    grad_tol: float = 1e-5
    value_tol: float = 1e-8
    mv_floor: float = 1e-3

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("d must be nonnegative")
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be positive")
        if not (self.step_init > 0.0 and 0.0 < self.step_shrink < 1.0):
            raise ValueError("invalid line-search parameters")
        if not (self.grad_tol > 0.0 and self.value_tol > 0.0 and self.mv_floor >= 0.0):
            raise ValueError("tolerances must be positive (mv_floor nonnegative)")


@dataclass(frozen=True)
class DirectionDiagnostics:
    """Per-direction search record."""

    winner_restart: int
    iterations: int
    grad_norm: float
    achieved_mv: float
    no_ascent: bool
    bandwidth: float


@dataclass(frozen=True)
class ExtractionResult:
    basis: DirectionBasis
    diagnostics: tuple[DirectionDiagnostics, ...]

    @property
    def effective_d(self) -> int:
        return self.basis.d


def _stack_prev(prev, p: int) -> np.ndarray:
    rows = np.asarray([np.asarray(v, dtype=np.float64).ravel() for v in prev])
    if rows.size == 0:
        return np.empty((0, p))
    if rows.shape[1] != p:
        raise ValueError(f"previous directions must have length {p}")
    return rows


def null_space_basis(prev, p: int) -> np.ndarray:
    """Orthonormal basis (p x (p-k) columns) of the complement of ``prev``."""
    rows = _stack_prev(prev, p)
    k = rows.shape[0]
    if k >= p:
        raise InfeasibleSubspace(f"{k} constraints leave no direction in R^{p}")
    if k == 0:
        return np.eye(p)
    if np.linalg.matrix_rank(rows) < k:
        raise RankDeficientPrev("previous directions are linearly dependent")
    gram = rows @ rows.T
    if np.max(np.abs(gram - np.eye(k))) > 1e-6:
        raise ValueError("previous directions must be orthonormal")
    basis = null_space(rows)
    if basis.shape != (p, p - k):
        raise RankDeficientPrev("unexpected null-space dimension")
    return basis


def _moment_seed(data: Dataset) -> np.ndarray:
    """Ridge-regularized discriminant-style seed (Sigma + gamma I)^-1 (mean gap)."""
    x = data.features
    overall = x.mean(axis=0)
    cov = np.atleast_2d(np.cov(x, rowvar=False))
    gamma = 1e-3 * np.trace(cov) / data.p
    class_means = np.stack([x[data.labels == r].mean(axis=0) for r in range(data.n_classes)])
    gaps = class_means - overall
    star = int(np.argmax(np.linalg.norm(gaps, axis=1)))
    try:
        return np.linalg.solve(cov + gamma * np.eye(data.p), gaps[star])
    except np.linalg.LinAlgError:
        return gaps[star]


def _random_unit(gen: np.random.Generator, m: int) -> np.ndarray:
    while True:
        v = gen.standard_normal(m)
        norm = np.linalg.norm(v)
        if norm > 1e-12:
            return v / norm


def _initial_reduced(data: Dataset, complement: np.ndarray, count: int, rng: RngStream):
    """Start coordinates in the reduced space: moment seed first, then random."""
    gen = rng.generator()
    m = complement.shape[1]
    seed = complement.T @ _moment_seed(data)
    norm = np.linalg.norm(seed)
    starts = [seed / norm if norm > 1e-12 else _random_unit(gen, m)]
    while len(starts) < count:
        starts.append(_random_unit(gen, m))
    return starts


def initial_directions(data: Dataset, prev, count: int, rng: RngStream) -> list[np.ndarray]:
    """Unit-norm starting directions orthogonal to ``prev``."""
    if count < 1:
        raise ValueError("count must be positive")
    complement = null_space_basis(prev, data.p)
    return [complement @ c for c in _initial_reduced(data, complement, count, rng)]


def _sign_canonical(beta: np.ndarray) -> np.ndarray:
    lead = int(np.argmax(np.abs(beta)))
    return -beta if beta[lead] < 0.0 else beta


def _ascend(eval_fn, grad_fn, start: np.ndarray, opt: OptimizerConfig):
    """Backtracking projected gradient ascent on the unit sphere."""
    c = start
    value = eval_fn(c)
    start_value = value
    iterations = 0
    grad_norm = np.inf
    for _ in range(opt.max_iters):
        grad = grad_fn(c)
        tangent = grad - (grad @ c) * c
        grad_norm = float(np.linalg.norm(tangent))
        if grad_norm < opt.grad_tol:
            break
        step = opt.step_init
        candidate = None
        cand_value = value
        for _ in range(_MAX_BACKTRACKS):
            trial = c + step * tangent
            norm = np.linalg.norm(trial)
            if norm > 0.0:
                trial = trial / norm
                trial_value = eval_fn(trial)
                if trial_value > value:
                    candidate, cand_value = trial, trial_value
                    break
            step *= opt.step_shrink
        if candidate is None:
            break
        gain = cand_value - value
        c, value = candidate, cand_value
        iterations += 1
        if gain < opt.value_tol:
            break
    return c, value, iterations, grad_norm, value > start_value


def maximize_direction(
    data: Dataset,
    prev,
    mv_config: MvConfig,
    opt: OptimizerConfig,
    rng: RngStream,
) -> tuple[np.ndarray, float, DirectionDiagnostics]:
    """Best feasible direction over ``opt.restarts`` independent starts.

    The winner is chosen by (value, restart order), so the result does not
    depend on how restarts are scheduled. The returned direction is
    sign-canonicalized: its largest-magnitude coordinate is positive.
    """
    if mv_config.mode != "smoothed":
        raise StepModeGradient(
            "direction search ascends the smoothed objective; step mode has no gradient"
        )
    complement = null_space_basis(prev, data.p)
    starts = _initial_reduced(data, complement, opt.restarts, rng)

    reduced = Dataset(
        np.ascontiguousarray(data.features @ complement), data.labels, data.class_labels
    )
    # Bandwidth from the seed direction's scores, held fixed for this
    # direction's entire search so the objective is stationary.
    seed_scores = reduced.features @ starts[0]
    if mv_config.bandwidth is None:
        fixed_config = mv_config.with_bandwidth(bandwidth_rule(seed_scores))
    else:
        fixed_config = mv_config

    def eval_fn(c):
        return mv_empirical(
            reduced.features @ c, reduced.labels, fixed_config, n_classes=data.n_classes
        )

    def grad_fn(c):
        return mv_gradient(reduced, c, fixed_config)

    best = None
    any_improved = False
    for index, start in enumerate(starts):
        c, value, iterations, grad_norm, improved = _ascend(eval_fn, grad_fn, start, opt)
        any_improved = any_improved or improved
        if best is None or value > best[0]:
            best = (value, index, c, iterations, grad_norm)
    value, index, c, iterations, grad_norm = best

    beta = complement @ c
    beta = _sign_canonical(beta / np.linalg.norm(beta))
    if len(prev):
        overlap = np.max(np.abs(_stack_prev(prev, data.p) @ beta))
        assert overlap <= 1e-6, f"feasibility violated: overlap {overlap}"
    assert abs(np.linalg.norm(beta) - 1.0) <= 1e-8
    diag = DirectionDiagnostics(
        winner_restart=index,
        iterations=iterations,
        grad_norm=grad_norm,
        achieved_mv=value,
        no_ascent=not any_improved,
        bandwidth=fixed_config.bandwidth,
    )
    return beta, value, diag


def fit_mmv(
    data: Dataset,
    mv_config: MvConfig,
    opt: OptimizerConfig,
    rng: RngStream,
) -> ExtractionResult:
    """Extract up to ``opt.d`` directions sequentially.

    Stops early when a direction's achieved index value falls below
    ``opt.mv_floor``; that direction is discarded and the effective dimension
    is the number kept.
    """
    if opt.d > data.p:
        raise InfeasibleSubspace(f"cannot extract {opt.d} directions in R^{data.p}")
    directions: list[np.ndarray] = []
    values: list[float] = []
    diagnostics: list[DirectionDiagnostics] = []
    for k in range(opt.d):
        beta, value, diag = maximize_direction(
            data, directions, mv_config, opt, rng.child("direction", k)
        )
        diagnostics.append(diag)
        if value < opt.mv_floor:
            break
        directions.append(beta)
        values.append(value)
    stacked = np.asarray(directions) if directions else np.empty((0, data.p))
    clipped = np.clip(np.asarray(values, dtype=np.float64), 0.0, 1.0)
    basis = DirectionBasis(stacked, clipped)
    return ExtractionResult(basis, tuple(diagnostics))
