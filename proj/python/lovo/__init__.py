"""Python access to the LOVO core: edge decisions, predictors, simulation and cross-validation."""

from ._lovo import (
    Abstained,
    DomainError,
    InvariantViolation,
    PreconditionError,
    crossval,
    decide_edge,
    latent_project,
    lemma_study_point,
    m_separated,
    maxent,
    parent_adjustment,
    simulate,
    spearman,
)

__all__ = [
    "Abstained",
    "DomainError",
    "InvariantViolation",
    "PreconditionError",
    "crossval",
    "decide_edge",
    "latent_project",
    "lemma_study_point",
    "m_separated",
    "maxent",
    "parent_adjustment",
    "simulate",
    "spearman",
]
