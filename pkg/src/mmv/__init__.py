"""Dimension reduction for classification by maximizing the mean-variance
dependence index between projected predictors and a categorical label, with
the downstream classifiers, simulation designs, and cross-validation harness
used to evaluate it.
"""

from .backends import backend_name
from .cdf import CdfMode, KernelSpec, bandwidth_rule, per_class_cdfs, smoothed_cdf, step_cdf
from .classifiers import (
    KnnModel,
    LdaModel,
    LogisticModel,
    Pipeline,
    fit_knn,
    fit_lda,
    fit_logistic,
    predict,
)
from .data import Dataset, DirectionBasis, class_proportions, validate_dataset
from .evaluate import (
    CvPlan,
    ExperimentReport,
    MethodSpec,
    cv_error,
    fit_pipeline,
    kfold_indices,
    parse_method,
    run_experiment,
)
from .mvindex import (
    GaussianTwoClassModel,
    MvConfig,
    mv_empirical,
    mv_gradient,
    mv_of_direction,
    mv_population_gaussian,
    screen_by_mv,
)
from .optimizer import (
    ExtractionResult,
    OptimizerConfig,
    fit_mmv,
    initial_directions,
    maximize_direction,
    null_space_basis,
)
from .rng import RngStream
from .simulate import (
    ModelSpec,
    ar_covariance,
    gen_gaussian_two_class,
    gen_model_i,
    gen_model_ii,
    gen_model_iii,
    gen_model_iv,
    generate,
)

__version__ = "0.1.0"

__all__ = [
    "CdfMode",
    "CvPlan",
    "Dataset",
    "DirectionBasis",
    "ExperimentReport",
    "ExtractionResult",
    "GaussianTwoClassModel",
    "KernelSpec",
    "KnnModel",
    "LdaModel",
    "LogisticModel",
    "MethodSpec",
    "ModelSpec",
    "MvConfig",
    "OptimizerConfig",
    "Pipeline",
    "RngStream",
    "ar_covariance",
    "backend_name",
    "bandwidth_rule",
    "class_proportions",
    "cv_error",
    "fit_knn",
    "fit_lda",
    "fit_logistic",
    "fit_mmv",
    "fit_pipeline",
    "gen_gaussian_two_class",
    "gen_model_i",
    "gen_model_ii",
    "gen_model_iii",
    "gen_model_iv",
    "generate",
    "initial_directions",
    "kfold_indices",
    "maximize_direction",
    "mv_empirical",
    "mv_gradient",
    "mv_of_direction",
    "mv_population_gaussian",
    "null_space_basis",
    "parse_method",
    "per_class_cdfs",
    "predict",
    "run_experiment",
    "screen_by_mv",
    "smoothed_cdf",
    "step_cdf",
    "validate_dataset",
]
