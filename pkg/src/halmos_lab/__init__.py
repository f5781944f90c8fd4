"""halmos-lab: almost commuting structured matrices and their obstructions.

Generate families of almost commuting self-adjoint matrices over R/C/H,
quantify how far they are from commuting contractions on the unit sphere,
compute the K-theoretic obstruction indices that block commuting
approximation, search for nearby exactly commuting tuples, and verify the
mod-8 module tables behind the obstruction in exact integer arithmetic.
"""

__version__ = "0.1.0"

from .structured import (
    MatrixTuple,
    SymmetryClass,
    clamp_spectrum,
    hermitize,
    is_quaternionic,
    op_norm,
    quaternion_embed,
    sharp_dual,
)
from .diagnostics import DiagnosticsReport, commutator_defect, diagnose, sphere_defect

__all__ = [
    "DiagnosticsReport",
    "MatrixTuple",
    "SymmetryClass",
    "__version__",
    "clamp_spectrum",
    "commutator_defect",
    "diagnose",
    "hermitize",
    "is_quaternionic",
    "op_norm",
    "quaternion_embed",
    "sharp_dual",
    "sphere_defect",
]
