"""Takiff-Toda integrable systems.

Truncated-current arithmetic (:mod:`.series`), root data (:mod:`.lie`),
orbit coordinates and conserved quantities (:mod:`.phase`), the flow
(:mod:`.dynamics`), closed-form solutions (:mod:`.solutions`) and a batch
CLI (:mod:`.cli`).
"""

from .errors import (
    MissingRepresentationError,
    NonFiniteStateError,
    NonPositiveLeadingCoefficientError,
    NonUnitError,
    OrderMismatchError,
    SingularPairingError,
    TakiffError,
)
from .kernels import BACKEND
from .lie import RootData, lattice_window, type_a
from .phase import CoeffState, LaxMatrix, PhaseState
from .series import Jet

__all__ = [
    "BACKEND",
    "CoeffState",
    "Jet",
    "LaxMatrix",
    "MissingRepresentationError",
    "NonFiniteStateError",
    "NonPositiveLeadingCoefficientError",
    "NonUnitError",
    "OrderMismatchError",
    "PhaseState",
    "RootData",
    "SingularPairingError",
    "TakiffError",
    "lattice_window",
    "type_a",
]
__version__ = "0.1.0"
