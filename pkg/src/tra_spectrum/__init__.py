"""Bound states and resonances of the 1/r^2-singular hyperbolic potential.

V(r) = [V0 + V1 tanh^2(lr) + V2 tanh^4(lr)] / sinh^2(lr)

Three independent solvers are provided: the tridiagonal-representation
parameter-spectrum procedure (:mod:`.pps`), plain Hamiltonian diagonalization
in the Jacobi basis (:mod:`.hd`) and complex scaling in a Laguerre basis
(:mod:`.cs`).
"""

from .errors import DomainError, NumericalError
from .potential import PotentialParams, classify_configuration

__all__ = ["DomainError", "NumericalError", "PotentialParams", "classify_configuration"]
__version__ = "0.1.0"
