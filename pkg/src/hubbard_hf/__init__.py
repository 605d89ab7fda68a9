"""Zero-temperature Hartree-Fock phase diagram of the 2D Hubbard model."""

from .errors import (
    BracketError,
    DivergentIntegralError,
    DomainError,
    QuadratureError,
    RadicandError,
    UndefinedFreeEnergyError,
)
from .free_energy import PhaseLabel, PhaseRecord, classify
from .meanfield import ModelPoint

__all__ = [
    "BracketError",
    "DivergentIntegralError",
    "DomainError",
    "ModelPoint",
    "PhaseLabel",
    "PhaseRecord",
    "QuadratureError",
    "RadicandError",
    "UndefinedFreeEnergyError",
    "classify",
]
