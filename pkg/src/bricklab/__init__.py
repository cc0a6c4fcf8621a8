"""Exact computation with bricks, torsion classes and brick chain filtrations
for finite-dimensional modules over quiver algebras over prime fields."""

from .errors import (
    BadWitness,
    BrickLabError,
    BudgetExceeded,
    CertificateFailure,
    IncompleteUniverse,
    MalformedInput,
    NotClosed,
    OutOfUniverse,
)
from .linalg import DEFAULT_BUDGET, PrimeField, Subspace
from .quiver import Algebra, Arrow, Morphism, Representation, SubRepresentation

__all__ = [
    "Algebra",
    "Arrow",
    "BadWitness",
    "BrickLabError",
    "BudgetExceeded",
    "CertificateFailure",
    "DEFAULT_BUDGET",
    "IncompleteUniverse",
    "MalformedInput",
    "Morphism",
    "NotClosed",
    "OutOfUniverse",
    "PrimeField",
    "Representation",
    "SubRepresentation",
    "Subspace",
]
