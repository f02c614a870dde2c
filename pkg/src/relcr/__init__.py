"""Color refinement on relational structures, with acyclic homomorphism
counts, guarded counting logic and a bijection game as cross-checks."""

from .core import (Signature, Structure, TupleRef, disjoint_union,
                   parse_structure, serialize_structure, stp)
from .rcr import rcr_distinguishes, rcr_run
from .cr import cr_distinguishes, cr_run

__all__ = [
    "Signature", "Structure", "TupleRef", "disjoint_union",
    "parse_structure", "serialize_structure", "stp",
    "rcr_run", "rcr_distinguishes", "cr_run", "cr_distinguishes",
]

__version__ = "0.1.0"
