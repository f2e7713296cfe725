"""Directional quantile classifiers.

Classification by asymmetric quantile losses of one-dimensional projections:
train with :func:`fit`, project onto data-driven direction sets, and compare
against quantile-family baselines.  Includes exact error-rate calculators for
two univariate populations and a replicated simulation benchmark harness.
"""

from .baselines import BaselineModel, fit_centroid, fit_cqc, fit_median
from .classifier import (
    DEFAULT_THETA_GRID,
    DqcConfig,
    TrainedDQC,
    direction_discrepancies,
    directional_class_quantiles,
    fit,
    fit_with_directions,
    solve_weights,
)
from .datasets import LabeledDataset
from .directions import (
    DirectionSet,
    estimate_optimal_direction,
    optimal_direction,
    sample_around,
    sample_uniform_sphere,
)
from .errors import NumericalError
from .quantiles import check_level, empirical_quantile, loss_gap, quantile_loss
from .simbench import (
    BenchmarkReport,
    ScenarioConfig,
    augment_noise,
    generate_scenario,
    loo_validate,
    make_classifier,
    random_correlation_matrix,
    run_benchmark,
    sample_mvt,
    scenario_transform,
)
from .theory import (
    PopulationPair,
    UnivariateDistribution,
    correct_classification_prob,
    decision_threshold,
    from_scipy,
    misclassification_prob,
    optimal_level,
    psi_curve,
)

__version__ = "0.1.0"

__all__ = [
    "BaselineModel",
    "BenchmarkReport",
    "DEFAULT_THETA_GRID",
    "DirectionSet",
    "DqcConfig",
    "LabeledDataset",
    "NumericalError",
    "PopulationPair",
    "ScenarioConfig",
    "TrainedDQC",
    "UnivariateDistribution",
    "augment_noise",
    "check_level",
    "correct_classification_prob",
    "decision_threshold",
    "direction_discrepancies",
    "directional_class_quantiles",
    "empirical_quantile",
    "estimate_optimal_direction",
    "fit",
    "fit_centroid",
    "fit_cqc",
    "fit_median",
    "fit_with_directions",
    "from_scipy",
    "generate_scenario",
    "loo_validate",
    "loss_gap",
    "make_classifier",
    "misclassification_prob",
    "optimal_direction",
    "optimal_level",
    "psi_curve",
    "quantile_loss",
    "random_correlation_matrix",
    "run_benchmark",
    "sample_around",
    "sample_mvt",
    "sample_uniform_sphere",
    "scenario_transform",
    "solve_weights",
]
