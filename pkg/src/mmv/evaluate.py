"""Cross-validation harness: stratified folds, pipeline fitting without
leakage, and repeated experiments with mean/sd summaries.

Every fold fits the complete pipeline (optional marginal screening, optional
direction extraction, then the classifier) on the training rows only.
Repetitions regenerate simulated data, or re-randomize folds for a fixed
dataset, each from its own derived random stream; results are therefore
identical for any worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .classifiers import DEFAULT_KNN_K, Pipeline, fit_knn, fit_lda, fit_logistic, predict
from .data import Dataset, DirectionBasis
from .errors import TooManyFolds
from .mvindex import MvConfig, screen_by_mv
from .optimizer import OptimizerConfig, fit_mmv
from .rng import RngStream
from .simulate import ModelSpec, generate

CLASSIFIERS = ("lda", "logistic", "knn")


def worker_count() -> int:
    """Worker cap for repetition-level threading; MMV_THREADS overrides."""
    env = os.environ.get("MMV_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


@dataclass(frozen=True)
class CvPlan:
    """Fold count, stratification switch, and the fold-assignment seed."""

    folds: int = 10
    stratified: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.folds < 2:
            raise ValueError("need at least two folds")


@dataclass(frozen=True)
class MethodSpec:
    """A named pipeline: classifier, optional reduction, and their settings."""

    classifier: str
    reduce: bool = False
    mv_config: MvConfig = MvConfig()
    optimizer: OptimizerConfig = OptimizerConfig()
    knn_k: int = DEFAULT_KNN_K
    screen_keep: int | None = None

    def __post_init__(self):
        if self.classifier not in CLASSIFIERS:
            raise ValueError(f"unknown classifier {self.classifier!r}")

    @property
    def name(self) -> str:
        label = f"mmv+{self.classifier}" if self.reduce else self.classifier
        if self.screen_keep is not None:
            label = f"screen({self.screen_keep})+{label}"
        return label


def parse_method(
    name: str,
    d: int = 1,
    mv_config: MvConfig = MvConfig(),
    optimizer: OptimizerConfig | None = None,
    knn_k: int = DEFAULT_KNN_K,
    screen_keep: int | None = None,
) -> MethodSpec:
    """Build a MethodSpec from a name like "mmv+lda", "knn", "mmv+logistic"."""
    token = name.strip().lower()
    reduce = token.startswith("mmv+")
    classifier = token.removeprefix("mmv+")
    opt = optimizer if optimizer is not None else OptimizerConfig(d=d)
    return MethodSpec(classifier, reduce, mv_config, opt, knn_k, screen_keep)


@dataclass(frozen=True)
class ExperimentReport:
    """Per-repetition CV errors for one method with their summary stats."""

    method: str
    errors: tuple[float, ...]
    mean: float
    sd: float
    repetitions: int

    @property
    def single_repetition(self) -> bool:
        return self.repetitions == 1

    @classmethod
    def from_errors(cls, method: str, errors) -> "ExperimentReport":
        errs = tuple(float(e) for e in errors)
        mean = float(np.mean(errs))
        sd = float(np.std(errs, ddof=1)) if len(errs) > 1 else 0.0
        return cls(method, errs, mean, sd, len(errs))


def kfold_indices(labels, plan: CvPlan) -> list[tuple[np.ndarray, np.ndarray]]:
    """Disjoint (train, test) index pairs partitioning 0..n-1.

    Stratified mode deals each class round-robin into folds, keeping class
    proportions within one sample per fold and guaranteeing every training
    fold sees all classes. Classes scarcer than the fold count are allowed
    (some test folds then hold none of them); a class needs at least two
    members so that no training fold loses it entirely.
    """
    labels = np.asarray(labels)
    n = labels.size
    gen = RngStream(plan.seed).child("folds").generator()
    assignments = np.empty(n, dtype=np.int64)
    if plan.stratified:
        if plan.folds > n:
            raise TooManyFolds(f"{plan.folds} folds but only {n} samples")
        classes, counts = np.unique(labels, return_counts=True)
        smallest = counts.min()
        if smallest < 2:
            # Round-robin spreads a class over min(count, folds) distinct
            # folds, so two members suffice to keep the class present in
            # every training fold; a singleton class cannot be split.
            raise TooManyFolds(
                f"stratified folds need at least two samples per class, "
                f"smallest class has {smallest}"
            )
        for cls in classes:
            members = np.nonzero(labels == cls)[0]
            members = gen.permutation(members)
            assignments[members] = np.arange(members.size) % plan.folds
    else:
        if plan.folds > n:
            raise TooManyFolds(f"{plan.folds} folds but only {n} samples")
        perm = gen.permutation(n)
        assignments[perm] = np.arange(n) % plan.folds
    splits = []
    everything = np.arange(n)
    for f in range(plan.folds):
        test = everything[assignments == f]
        train = everything[assignments != f]
        splits.append((train, test))
    return splits


def fit_pipeline(train: Dataset, method: MethodSpec, rng: RngStream) -> Pipeline:
    """Fit the full pipeline on a training set.

    Screening and direction extraction both happen here, inside the fold, so
    fitted parameters are functions of the training rows only. Directions are
    re-embedded in the original coordinate system (zeros on screened-out
    columns), which lets prediction consume raw feature vectors.
    """
    basis: DirectionBasis | None = None
    working = train
    kept = None
    if method.screen_keep is not None:
        kept = screen_by_mv(train, method.screen_keep)
        working = Dataset(
            np.ascontiguousarray(train.features[:, kept]), train.labels, train.class_labels
        )
    if method.reduce:
        result = fit_mmv(working, method.mv_config, method.optimizer, rng)
        if result.basis.d > 0:
            directions = result.basis.directions
            if kept is not None:
                embedded = np.zeros((directions.shape[0], train.p))
                embedded[:, kept] = directions
                directions = embedded
            basis = DirectionBasis(directions, result.basis.mv_values)
        # A basis below the index floor means no usable signal; fall back to
        # the (possibly screened) raw features rather than a 0-dim space.
    if basis is None and kept is not None:
        selection = np.zeros((kept.size, train.p))
        selection[np.arange(kept.size), kept] = 1.0
        basis = DirectionBasis(selection)
    projected = (
        working
        if basis is None
        else Dataset(basis.transform(train.features), train.labels, train.class_labels)
    )
    if method.classifier == "lda":
        model = fit_lda(projected)
    elif method.classifier == "logistic":
        model = fit_logistic(projected)
    else:
        model = fit_knn(projected, method.knn_k)
    return Pipeline(model, basis)


def cv_error(data: Dataset, method: MethodSpec, plan: CvPlan, rng: RngStream) -> float:
    """Cross-validated misclassification fraction for one method."""
    wrong = 0
    for f, (train_rows, test_rows) in enumerate(kfold_indices(data.labels, plan)):
        pipeline = fit_pipeline(data.subset(train_rows), method, rng.child("fold", f))
        predicted = predict(pipeline, data.features[test_rows])
        wrong += int(np.sum(predicted != data.labels[test_rows]))
    return wrong / data.n


def _repetition_seed(stream: RngStream) -> int:
    return int(stream.generator().integers(0, 2**31 - 1))


def run_experiment(
    source: ModelSpec | Dataset,
    methods: list[MethodSpec],
    plan: CvPlan,
    repetitions: int,
    seed: int,
) -> list[ExperimentReport]:
    """Repeat cross-validation and summarize each method.

    A simulated source is regenerated per repetition; a fixed dataset keeps
    its rows and only the fold assignment is re-randomized. Reports are
    deterministic in ``seed`` regardless of the worker count.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be positive")
    root = RngStream(seed)

    def one_repetition(rep: int) -> list[float]:
        if isinstance(source, ModelSpec):
            data = generate(source, root.child("data", rep))
        else:
            data = source
        rep_plan = replace(plan, seed=_repetition_seed(root.child("folds", rep)))
        return [
            cv_error(data, method, rep_plan, root.child("fit", rep, m))
            for m, method in enumerate(methods)
        ]

    workers = min(worker_count(), repetitions)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one_repetition, range(repetitions)))
    else:
        rows = [one_repetition(rep) for rep in range(repetitions)]
    return [
        ExperimentReport.from_errors(method.name, [row[m] for row in rows])
        for m, method in enumerate(methods)
    ]
