"""Typical spectra of reduced density matrices of random pure states."""

from ._core import (
    AccuracyError,
    ConvergenceError,
    DomainError,
    FeasibilityError,
    MagnitudeError,
    closedform,
    continuum,
    coulomb,
    fixedpurity,
    orthopoly,
    purity,
    quantifiers,
    sampler,
    von_neumann_entropy,
)

__all__ = [
    "AccuracyError",
    "ConvergenceError",
    "DomainError",
    "FeasibilityError",
    "MagnitudeError",
    "closedform",
    "continuum",
    "coulomb",
    "fixedpurity",
    "orthopoly",
    "purity",
    "quantifiers",
    "sampler",
    "von_neumann_entropy",
]
