"""Computations with regular Hom-Lie algebras, matrix Hom-Lie groups and finite Hom-groups."""

from .algebra import HomLieAlgebra, check_axioms, center, induced_lie, q_sl2, yau_twist
from .exactnum import Matrix, inverse, mat_exp, nullspace, rank
from .matgrp import TwistedMatrixSpace

__version__ = "0.1.0"

__all__ = [
    "HomLieAlgebra",
    "Matrix",
    "TwistedMatrixSpace",
    "center",
    "check_axioms",
    "induced_lie",
    "inverse",
    "mat_exp",
    "nullspace",
    "q_sl2",
    "rank",
    "yau_twist",
]
