"""Evidential uncertainty quantification and two-view decision fusion."""

from ._backend import BACKEND
from .datagen import Dataset, GenConfig, PairedSample, generate, long_tail_weights
from .fusion import FusedDecision, fuse_baseline, fuse_opinions, fuse_sequence
from .harness import ComparisonReport, ExperimentConfig, run_experiment
from .loss import (
    LossBreakdown,
    bayes_risk_ce,
    global_loss,
    one_hot,
    reciprocal_loss,
    reciprocal_loss_grad,
)
from .metrics import (
    EvalReport,
    accuracy_and_macro_f1,
    average_relative_error,
    credible_count,
    uncertainty_histogram,
)
from .model import EvidenceHead, TrainConfig, TrainedPair, train_pair, train_softmax_baseline
from .numerics import digamma, log_gamma, log_multivariate_beta, trigamma
from .opinion import (
    DirichletParams,
    Evidence,
    Opinion,
    SimplexPoint,
    dirichlet_log_density,
    dirichlet_to_opinion,
    evidence_to_dirichlet,
    evidence_to_opinion,
    opinion_to_evidence,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ComparisonReport",
    "Dataset",
    "DirichletParams",
    "EvalReport",
    "Evidence",
    "EvidenceHead",
    "ExperimentConfig",
    "FusedDecision",
    "GenConfig",
    "LossBreakdown",
    "Opinion",
    "PairedSample",
    "SimplexPoint",
    "TrainConfig",
    "TrainedPair",
    "accuracy_and_macro_f1",
    "average_relative_error",
    "bayes_risk_ce",
    "credible_count",
    "digamma",
    "dirichlet_log_density",
    "dirichlet_to_opinion",
    "evidence_to_dirichlet",
    "evidence_to_opinion",
    "fuse_baseline",
    "fuse_opinions",
    "fuse_sequence",
    "generate",
    "global_loss",
    "log_gamma",
    "log_multivariate_beta",
    "long_tail_weights",
    "one_hot",
    "opinion_to_evidence",
    "reciprocal_loss",
    "reciprocal_loss_grad",
    "run_experiment",
    "train_pair",
    "train_softmax_baseline",
    "trigamma",
    "uncertainty_histogram",
]
