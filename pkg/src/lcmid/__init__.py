"""Identifiability analysis for latent class models with covariates."""

from lcmid.conditions import Caps, ConditionVerdict, IdentifiabilityReport, Status, evaluate
from lcmid.counterexample import CounterexamplePair, construct_pair, verify_distribution_equality
from lcmid.fixtures import fixture
from lcmid.linalg import KruskalRankResult, RankResult, has_full_column_rank, kruskal_rank, numeric_rank
from lcmid.matrices import (
    JacobianMatrix,
    Partition,
    ProbMatrix,
    build_jacobian,
    build_jacobian_zero_covariate,
    build_phi,
    build_psi,
    build_T,
    fisher_information,
    partition_submatrices,
)
from lcmid.model import (
    CoreParams,
    CovariateDesign,
    GDINACoeffs,
    ModelSpec,
    PatternSpace,
    QMatrix,
    RegressionParams,
    TransformedParams,
    enumerate_patterns,
    eta_from_beta,
    from_log_odds,
    gamma_to_gdina,
    gdina_to_gamma,
    per_subject_params,
    response_distribution,
    theta_from_gamma_lambda,
    to_log_odds,
)
from lcmid.sim import Dataset, SimConfig, simulate

__version__ = "0.1.0"

__all__ = [
    "Caps",
    "ConditionVerdict",
    "CoreParams",
    "CounterexamplePair",
    "CovariateDesign",
    "Dataset",
    "GDINACoeffs",
    "IdentifiabilityReport",
    "JacobianMatrix",
    "KruskalRankResult",
    "ModelSpec",
    "Partition",
    "PatternSpace",
    "ProbMatrix",
    "QMatrix",
    "RankResult",
    "RegressionParams",
    "SimConfig",
    "Status",
    "TransformedParams",
    "build_T",
    "build_jacobian",
    "build_jacobian_zero_covariate",
    "build_phi",
    "build_psi",
    "construct_pair",
    "enumerate_patterns",
    "eta_from_beta",
    "evaluate",
    "fisher_information",
    "fixture",
    "from_log_odds",
    "gamma_to_gdina",
    "gdina_to_gamma",
    "has_full_column_rank",
    "kruskal_rank",
    "numeric_rank",
    "partition_submatrices",
    "per_subject_params",
    "response_distribution",
    "simulate",
    "theta_from_gamma_lambda",
    "to_log_odds",
    "verify_distribution_equality",
]
