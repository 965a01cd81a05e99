"""Core domain types: validated datasets and direction bases.

A :class:`Dataset` pairs an ``n x p`` feature matrix with dense integer class
labels ``0..R-1`` assigned in first-appearance order of the original labels.
All types are immutable after construction; operations on them are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, EmptyClass, EmptyInput, NonFiniteValue, SingleClass

UNIT_NORM_TOL = 1e-8
ORTHOGONALITY_TOL = 1e-6


@dataclass(frozen=True)
class Dataset:
    """Feature matrix plus dense class labels.

    Construct through :func:`validate_dataset`; direct construction skips
    validation and is reserved for internal callers that already hold
    validated arrays (e.g. projections of a validated dataset).
    """

    features: np.ndarray
    labels: np.ndarray
    class_labels: tuple = ()

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def p(self) -> int:
        return self.features.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.class_labels) if self.class_labels else int(self.labels.max()) + 1

    @property
    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_classes)

    def subset(self, rows) -> "Dataset":
        """Row slice that keeps the parent's dense label ids.

        Raises EmptyClass when the slice drops a class entirely, so
        cross-validation folds that strand a class fail loudly instead of
        silently renumbering labels.
        """
        rows = np.asarray(rows, dtype=np.intp)
        labels = self.labels[rows]
        present = np.bincount(labels, minlength=self.n_classes)
        if np.any(present == 0):
            missing = np.nonzero(present == 0)[0]
            raise EmptyClass(f"subset drops class id(s) {missing.tolist()}")
        if rows.size < 2:
            raise EmptyInput("subset needs at least two rows")
        return Dataset(self.features[rows], labels, self.class_labels)


def dense_labels(labels) -> tuple[np.ndarray, tuple]:
    """Map arbitrary labels to dense ids 0..R-1 in first-appearance order."""
    seen: dict = {}
    out = np.empty(len(labels), dtype=np.int64)
    for i, lab in enumerate(labels):
        key = lab.item() if isinstance(lab, np.generic) else lab
        if key not in seen:
            seen[key] = len(seen)
        out[i] = seen[key]
    return out, tuple(seen)


def validate_dataset(features, labels) -> Dataset:
    """Validate raw inputs and return an immutable :class:`Dataset`.

    Classes are relabeled to 0..R-1 in order of first appearance; the
    original labels are retained in ``class_labels`` for reporting.
    Idempotent: validating a dataset's own arrays reproduces it.
    """
    x = np.ascontiguousarray(np.asarray(features, dtype=np.float64))
    if x.ndim != 2:
        raise DimensionMismatch(f"features must be 2-d, got shape {x.shape}")
    if len(labels) != x.shape[0]:
        raise DimensionMismatch(
            f"{x.shape[0]} feature rows but {len(labels)} labels"
        )
    if x.shape[0] < 2:
        raise EmptyInput(f"need at least two observations, got {x.shape[0]}")
    if x.shape[1] < 1:
        raise DimensionMismatch("need at least one predictor column")
    if not np.all(np.isfinite(x)):
        bad = np.argwhere(~np.isfinite(x))[0]
        raise NonFiniteValue(f"non-finite feature at row {bad[0]}, column {bad[1]}")
    dense, originals = dense_labels(labels)
    if len(originals) < 2:
        raise SingleClass("labels contain a single class")
    return Dataset(x, dense, originals)


def class_proportions(data: Dataset) -> np.ndarray:
    """Empirical class proportions n_r / n; entries sum to one."""
    return data.class_counts / data.n


@dataclass(frozen=True)
class DirectionBasis:
    """Ordered orthonormal projection directions with their achieved index values.

    ``directions`` has shape (d, p); row k is the k-th extracted unit vector.
    """

    directions: np.ndarray
    mv_values: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        dirs = np.ascontiguousarray(np.asarray(self.directions, dtype=np.float64))
        if dirs.ndim != 2:
            raise DimensionMismatch(f"directions must be 2-d, got shape {dirs.shape}")
        vals = (
            np.zeros(dirs.shape[0])
            if self.mv_values is None
            else np.asarray(self.mv_values, dtype=np.float64)
        )
        if vals.shape != (dirs.shape[0],):
            raise DimensionMismatch("one mv value required per direction")
        norms = np.linalg.norm(dirs, axis=1)
        if dirs.shape[0] and np.max(np.abs(norms - 1.0)) > UNIT_NORM_TOL:
            raise ValueError("directions must have unit norm")
        gram = dirs @ dirs.T
        off = gram - np.diag(np.diag(gram))
        if dirs.shape[0] and np.max(np.abs(off)) > ORTHOGONALITY_TOL:
            raise ValueError("directions must be mutually orthogonal")
        if np.any(vals < 0.0) or np.any(vals > 1.0):
            raise ValueError("mv values must lie in [0, 1]")
        object.__setattr__(self, "directions", dirs)
        object.__setattr__(self, "mv_values", vals)

    @property
    def d(self) -> int:
        return self.directions.shape[0]

    @property
    def p(self) -> int:
        return self.directions.shape[1]

    def transform(self, x: np.ndarray) -> np.ndarray:
        """Project rows of ``x`` onto the basis, giving an (n, d) score matrix."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape[-1] != self.p:
            raise DimensionMismatch(
                f"basis expects {self.p} features, got {x.shape[-1]}"
            )
        return x @ self.directions.T
