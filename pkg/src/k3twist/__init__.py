"""Exact lattice and Hodge-theoretic computations for twisted K3 surfaces."""

from .errors import (BudgetExceeded, DegenerateBasis, InputError, InvalidPeriod, K3TwistError,
                     NotAnIsometry, PreconditionError, SearchExhausted)
from .lattice import IntLattice, LatticeInvariants, Sublattice, invariants
from .mukai import K3, MUKAI, Isometry, MukaiVector, isometry_from_matrix
from .hodge import BField, BrauerClass, Period, SurfaceDatum

__version__ = "0.1.0"

__all__ = [
    "BField", "BrauerClass", "BudgetExceeded", "DegenerateBasis", "InputError", "IntLattice",
    "InvalidPeriod", "Isometry", "K3", "K3TwistError", "LatticeInvariants", "MUKAI",
    "MukaiVector", "NotAnIsometry", "Period", "PreconditionError", "SearchExhausted",
    "Sublattice", "SurfaceDatum", "invariants", "isometry_from_matrix",
]
