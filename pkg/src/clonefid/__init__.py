"""Fidelity of classical-information duplication with a universal symmetric qubit cloner."""
from .cloner import (
    CloneParams,
    CloneSpectrum,
    SymDiagonal,
    alpha_sq,
    error_distribution,
    fidelity,
    info_fidelity,
    info_infidelity,
    reduced_diagonal,
    spectrum,
)
from .errors import DomainError, ResourceError

__all__ = [
    "CloneParams",
    "CloneSpectrum",
    "SymDiagonal",
    "DomainError",
    "ResourceError",
    "alpha_sq",
    "error_distribution",
    "fidelity",
    "info_fidelity",
    "info_infidelity",
    "reduced_diagonal",
    "spectrum",
]
__version__ = "0.1.0"
