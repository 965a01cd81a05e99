"""Classifiers over raw or projected features: ridge LDA, ridge-regularized
logistic regression fitted by safeguarded IRLS, and k-nearest neighbours.

A :class:`Pipeline` pairs a fitted classifier with an optional projection
basis; prediction projects first, then applies the decision rule. Labels are
the dense ids of the training dataset throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset, DirectionBasis
from .errors import (
    DegenerateCovariance,
    DimensionMismatch,
    KTooLarge,
    NonFiniteValue,
    NotBinary,
)

LDA_RIDGE = 1e-6
LOGISTIC_RIDGE = 1e-4
# Matches the Matlab classifier defaults the reference error tables were
# computed with (fitcknn uses a single neighbour).
DEFAULT_KNN_K = 1


@dataclass(frozen=True)
class LdaModel:
    """Linear rule: predict class 1 when weights . x > threshold.

    Internally the two dense classes play the roles -1 (id 0) and +1 (id 1);
    the threshold is the midpoint score shifted by the log prior odds.
    """

    weights: np.ndarray
    threshold: float
    class_pair: tuple[int, int] = (0, 1)


@dataclass(frozen=True)
class LogisticModel:
    """Logistic regression coefficients, intercept first; class 1 when the
    linear predictor is nonnegative."""

    coefficients: np.ndarray
    converged: bool = True


@dataclass(frozen=True)
class KnnModel:
    """Stored training scores and labels for majority-vote prediction."""

    points: np.ndarray
    labels: np.ndarray
    k: int
    n_classes: int


TrainedClassifier = LdaModel | LogisticModel | KnnModel


@dataclass(frozen=True)
class Pipeline:
    """Optional projection basis followed by a fitted classifier."""

    model: TrainedClassifier
    basis: DirectionBasis | None = None


def fit_lda(train: Dataset) -> LdaModel:
    """Fisher-style linear discriminant with a small ridge on the pooled
    covariance so the p > n case stays solvable."""
    if train.n_classes != 2:
        raise NotBinary(f"LDA needs two classes, got {train.n_classes}")
    counts = train.class_counts
    if np.any(counts < 2):
        raise DegenerateCovariance("each class needs at least two samples")
    x = train.features
    neg = x[train.labels == 0]
    pos = x[train.labels == 1]
    pooled = (
        (neg.shape[0] - 1) * np.atleast_2d(np.cov(neg, rowvar=False))
        + (pos.shape[0] - 1) * np.atleast_2d(np.cov(pos, rowvar=False))
    ) / (train.n - 2)
    gamma = LDA_RIDGE * np.trace(pooled) / train.p
    if gamma == 0.0:
        # Within-class constant features: fall back to an absolute ridge so
        # the rule degenerates to the (correctly oriented) mean-gap direction.
        gamma = LDA_RIDGE
    mean_neg = neg.mean(axis=0)
    mean_pos = pos.mean(axis=0)
    try:
        weights = np.linalg.solve(pooled + gamma * np.eye(train.p), mean_pos - mean_neg)
    except np.linalg.LinAlgError as exc:
        raise DegenerateCovariance("pooled covariance singular despite ridge") from exc
    if not np.all(np.isfinite(weights)):
        raise DegenerateCovariance("pooled covariance singular despite ridge")
    midpoint = 0.5 * float(weights @ (mean_pos + mean_neg))
    threshold = midpoint - float(np.log(pos.shape[0] / neg.shape[0]))
    return LdaModel(weights, threshold)


def _nll(eta: np.ndarray, y: np.ndarray, coef: np.ndarray, ridge: float) -> float:
    penalty = 0.5 * ridge * float(coef[1:] @ coef[1:])
    return float(np.sum(np.logaddexp(0.0, eta) - y * eta)) + penalty


def fit_logistic(train: Dataset, max_iters: int = 100, tol: float = 1e-8) -> LogisticModel:
    """Ridge-penalized logistic regression via IRLS with step halving.

    The penalty (on everything but the intercept) keeps separable data
    finite, so fitting never fails; hitting max_iters just clears the
    ``converged`` flag. The penalized loss is nonincreasing across
    iterations by construction.
    """
    if train.n_classes != 2:
        raise NotBinary(f"logistic regression needs two classes, got {train.n_classes}")
    y = train.labels.astype(np.float64)
    z = np.column_stack([np.ones(train.n), train.features])
    q = z.shape[1]
    penalty_diag = np.full(q, LOGISTIC_RIDGE)
    penalty_diag[0] = 0.0
    coef = np.zeros(q)
    eta = z @ coef
    loss = _nll(eta, y, coef, LOGISTIC_RIDGE)
    converged = False
    for _ in range(max_iters):
        prob = 1.0 / (1.0 + np.exp(-eta))
        weight = np.maximum(prob * (1.0 - prob), 1e-10)
        hessian = (z * weight[:, None]).T @ z + np.diag(penalty_diag)
        gradient = z.T @ (y - prob) - penalty_diag * coef
        try:
            direction = np.linalg.solve(hessian, gradient)
        except np.linalg.LinAlgError:
            break
        scale = 1.0
        proposal = coef
        proposal_loss = loss
        for _ in range(30):
            trial = coef + scale * direction
            trial_loss = _nll(z @ trial, y, trial, LOGISTIC_RIDGE)
            if trial_loss <= loss:
                proposal, proposal_loss = trial, trial_loss
                break
            scale *= 0.5
        shift = float(np.max(np.abs(proposal - coef)))
        coef = proposal
        loss = proposal_loss
        eta = z @ coef
        if shift < tol:
            converged = True
            break
    return LogisticModel(coef, converged)


def fit_knn(train: Dataset, k: int = DEFAULT_KNN_K) -> KnnModel:
    """Store the training set for Euclidean majority-vote prediction."""
    if k < 1:
        raise ValueError("k must be positive")
    if k > train.n:
        raise KTooLarge(f"k={k} exceeds the {train.n} training points")
    return KnnModel(train.features, train.labels, k, train.n_classes)


def _predict_knn(model: KnnModel, x: np.ndarray) -> np.ndarray:
    diffs = x[:, None, :] - model.points[None, :, :]
    distances = np.einsum("ijk,ijk->ij", diffs, diffs)
    # Stable sort breaks distance ties by lower training index; argmax over
    # vote counts breaks voting ties by smaller class id.
    nearest = np.argsort(distances, axis=1, kind="stable")[:, : model.k]
    votes = model.labels[nearest]
    out = np.empty(x.shape[0], dtype=np.int64)
    for i in range(x.shape[0]):
        out[i] = np.argmax(np.bincount(votes[i], minlength=model.n_classes))
    return out


def _model_dim(model: TrainedClassifier) -> int:
    if isinstance(model, LdaModel):
        return model.weights.size
    if isinstance(model, LogisticModel):
        return model.coefficients.size - 1
    return model.points.shape[1]


def predict(pipeline: Pipeline, x) -> np.ndarray | int:
    """Class ids for one query vector or a matrix of query rows."""
    arr = np.asarray(x, dtype=np.float64)
    single = arr.ndim == 1
    arr = np.atleast_2d(arr)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteValue("query contains non-finite values")
    if pipeline.basis is not None:
        arr = pipeline.basis.transform(arr)
    model = pipeline.model
    expected = _model_dim(model)
    if arr.shape[1] != expected:
        raise DimensionMismatch(f"classifier expects {expected} features, got {arr.shape[1]}")
    if isinstance(model, LdaModel):
        scores = arr @ model.weights
        out = np.where(scores > model.threshold, model.class_pair[1], model.class_pair[0])
    elif isinstance(model, LogisticModel):
        eta = model.coefficients[0] + arr @ model.coefficients[1:]
        out = (eta >= 0.0).astype(np.int64)
    else:
        out = _predict_knn(model, arr)
    return int(out[0]) if single else out.astype(np.int64)
