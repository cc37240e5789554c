"""Invariants of almost-complex structures on R x M and the lattice
arithmetic of TPC embedding constructions."""

from . import embed, errors, jspace, kirby, lattice, lens
from .errors import InvariantError

__version__ = "0.1.0"

__all__ = ["embed", "errors", "jspace", "kirby", "lattice", "lens", "InvariantError", "__version__"]
