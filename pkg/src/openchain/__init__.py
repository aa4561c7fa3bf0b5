"""Open XXX spin chains with diagonal and triangular boundaries, and the
boundary driven symmetric exclusion process built on them.

Modules
-------
scalars   exact rationals, complex floats and first order jets
linalg    basis conventions, Kronecker actions, exact elimination, sector solves
chain     R/K-matrices, monodromies, transfer matrices, Hamiltonians
bethe     Bethe equations, TQ relation, Bethe vectors
eigenmap  diagonal to triangular eigenvector maps, transformed reference state
ssep      Markov generator, similarity transform, closed-form steady state
oracles   matrix product ansatz and kernel based steady states
"""

from .chain import BoundaryParams
from .errors import OpenChainError
from .scalars import EXACT, FLOAT, Jet
from .ssep import SSEPRates

__version__ = "0.1.0"

__all__ = ["BoundaryParams", "SSEPRates", "Jet", "EXACT", "FLOAT", "OpenChainError"]
