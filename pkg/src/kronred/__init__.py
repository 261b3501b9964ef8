"""Exact reduction of linear systems ``E, A: U -> W`` and the structure it reveals.

Observation and control reductions run over Q (:class:`RatMatrix`) or over
finitely presented abelian groups (:class:`IntMatrix` with relations).  On
top of them sit the defect sequences, indices, Kronecker structure,
resolvent set, exactness audits, block synthesis and the weak-equivalence
normal form.
"""

__version__ = "0.1.0"

from .errors import *  # noqa: E402,F401,F403
from .linalg import RatMatrix, Subspace, det_poly, kernel, image, rank  # noqa: E402
from .zmod import AbInvariants, AbMorphism, IntMatrix, Lattice, PresentedAb, smith  # noqa: E402
from .reduction import (PencilSystem, Subquotient, control, control_reduce,  # noqa: E402
                        observe, observe_reduce, reduce_grid)
from .analysis import (analyze, control_chain, defect_dimension_identities,  # noqa: E402
                       defect_sequences, delta_chain, index_zero_equivalences,
                       indices, kronecker_structure, observation_chain, resolvent)
from .diagrams import audit, defcomm_checks  # noqa: E402
from .blocks import StructureSpec, assemble, make_block  # noqa: E402
from .strangeness import WeakTransform, act, invariants, normal_form  # noqa: E402

__all__ = [
    "RatMatrix", "Subspace", "det_poly", "kernel", "image", "rank",
    "AbInvariants", "AbMorphism", "IntMatrix", "Lattice", "PresentedAb", "smith",
    "PencilSystem", "Subquotient", "observe", "control", "observe_reduce",
    "control_reduce", "reduce_grid",
    "analyze", "observation_chain", "control_chain", "defect_sequences", "indices",
    "index_zero_equivalences", "kronecker_structure", "delta_chain", "resolvent",
    "defect_dimension_identities", "audit", "defcomm_checks",
    "StructureSpec", "assemble", "make_block",
    "WeakTransform", "act", "invariants", "normal_form",
]
