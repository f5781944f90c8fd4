"""Obstruction indices of almost commuting tuples.

Two invariants are computed:

* symplectic_determinant_index — for self-dual quadruples approximately on
  the 3-sphere: the sign of det [[H1+iH2, -H3+iH4], [H3+iH4, H1-iH2]].
  The determinant is real because the block matrix commutes with an
  antiunitary of square +1 built from the outer j and the inner self-dual
  structure; a negative sign obstructs commuting approximation.

* bott_index — half-signature (n+ - n-)/2 of B = sum_r H_r (x) g_r for a
  gamma system g.  Zero on exactly commuting sphere families (balanced
  spectrum), additive under direct sums, and constant under perturbations
  smaller than gap/(3d).  For the real five-matrix family this integer
  half-signature is exposed as the d=5 invariant (an extrapolation: it is
  computable, additive, and vanishes on commuting families).

Orientation conventions fixed here once: gamma systems are ordered as in
cliffords.complex_gammas, and the 2x2 sphere generator is
[[x1+ix2, -x3+ix4], [x3+ix4, x1-ix2]] (determinant +1 on the unit sphere).
Indices are declared valid only when the spectral gap (smallest singular
value of the index operator) clears the threshold; below it GapTooSmall is
raised, since the obstruction is only homotopy-invariant while the
operator stays invertible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .cliffords import CliffordRep, clifford_generators
from .errors import DimensionError, DomainError, GapTooSmall, StructureError
from .structured import MatrixTuple, SymmetryClass, check_class, op_norm

GAP_THRESHOLD = 1e-6
DET_IMAG_RTOL = 1e-8


@dataclass(frozen=True)
class IndexResult:
    group: str                      # "Integer" | "ZTwo" | "Trivial"
    value: int
    gap: float
    valid: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "value": int(self.value),
            "gap": float(self.gap),
            "valid": bool(self.valid),
            "detail": {k: (float(v) if isinstance(v, (int, float)) else v)
                       for k, v in self.detail.items()},
        }


def generator_function(x) -> np.ndarray:
    """The unit-determinant 2x2 unitary attached to a point of the 3-sphere."""
    x = np.asarray(x, dtype=float)
    if x.shape != (4,):
        raise DomainError("generator_function expects a point of R^4")
    if abs(float(x @ x) - 1.0) > 1e-10:
        raise DomainError("point is off the unit sphere")
    x1, x2, x3, x4 = (float(v) for v in x)
    return np.array(
        [[x1 + 1j * x2, -x3 + 1j * x4],
         [x3 + 1j * x4, x1 - 1j * x2]],
        dtype=complex,
    )


def sphere_matrix(t: MatrixTuple) -> np.ndarray:
    """M = [[H1+iH2, -H3+iH4], [H3+iH4, H1-iH2]] for a quadruple."""
    if t.d != 4:
        raise DomainError(f"the determinant index needs d=4, got d={t.d}")
    h1, h2, h3, h4 = t.matrices
    top = np.hstack([h1 + 1j * h2, -h3 + 1j * h4])
    bot = np.hstack([h3 + 1j * h4, h1 - 1j * h2])
    return np.vstack([top, bot])


def _log_det_sign(m: np.ndarray) -> tuple[complex, float]:
    """(unit phase, log|det|) via LU with partial pivoting, log-scale accumulation."""
    lu, piv = scipy.linalg.lu_factor(m, check_finite=False)
    diag = np.diag(lu)
    if np.any(diag == 0):
        raise DomainError("singular matrix in determinant")
    swaps = int(np.sum(piv != np.arange(len(piv))))
    phase = (-1.0) ** swaps * np.prod(diag / np.abs(diag))
    logabs = float(np.sum(np.log(np.abs(diag))))
    return complex(phase), logabs


def symplectic_determinant_index(
    t: MatrixTuple, gap_threshold: float = GAP_THRESHOLD
) -> IndexResult:
    """Z/2 index of a self-dual self-adjoint quadruple: 0 if det M > 0, 1 if < 0."""
    if t.symmetry is not SymmetryClass.QUATERNION_SELF_DUAL:
        raise StructureError("the determinant index needs the self-dual class")
    for h in t.matrices:
        check_class(h, SymmetryClass.QUATERNION_SELF_DUAL)
    m = sphere_matrix(t)
    gap = float(np.linalg.svd(m, compute_uv=False)[-1])
    if gap <= gap_threshold:
        raise GapTooSmall(gap, gap_threshold)
    phase, logabs = _log_det_sign(m)
    if abs(phase.imag) > DET_IMAG_RTOL:
        raise StructureError(
            f"determinant is not real (phase {phase!r}); input is not self-dual enough"
        )
    value = 0 if phase.real > 0 else 1
    return IndexResult(
        group="ZTwo", value=value, gap=gap, valid=True,
        detail={"log_abs_det": logabs, "det_sign": 1 if value == 0 else -1},
    )


def bott_operator(t: MatrixTuple, rep: CliffordRep) -> np.ndarray:
    """B = sum_r H_r (x) g_r, the self-adjoint localizer of the tuple."""
    if rep.d != t.d:
        raise DimensionError(f"tuple has d={t.d} but gamma system has d={rep.d}")
    n = t.n
    b = np.zeros((n * rep.dim, n * rep.dim), dtype=complex)
    for h, g in zip(t.matrices, rep.gammas):
        b += np.kron(h, g)
    return b


def bott_index(
    t: MatrixTuple, rep: CliffordRep, gap_threshold: float = GAP_THRESHOLD
) -> IndexResult:
    """Half-signature (n+ - n-)/2 of the localizer B."""
    b = bott_operator(t, rep)
    w = np.linalg.eigvalsh(b)
    gap = float(np.min(np.abs(w)))
    if gap <= gap_threshold:
        raise GapTooSmall(gap, gap_threshold)
    n_plus = int(np.sum(w > 0))
    n_minus = int(np.sum(w < 0))
    diff = n_plus - n_minus
    if diff % 2:
        raise DomainError("odd spectral asymmetry; gamma system dimension must be even")
    return IndexResult(
        group="Integer", value=diff // 2, gap=gap, valid=True,
        detail={"n_plus": n_plus, "n_minus": n_minus},
    )


def compute_index(
    t: MatrixTuple, method: str = "auto", gap_threshold: float = GAP_THRESHOLD,
    rep: CliffordRep | None = None,
) -> IndexResult:
    """Dispatch: det for self-dual quadruples, bott otherwise."""
    if method == "auto":
        method = ("det" if t.symmetry is SymmetryClass.QUATERNION_SELF_DUAL and t.d == 4
                  else "bott")
    if method == "det":
        return symplectic_determinant_index(t, gap_threshold)
    if method == "bott":
        if rep is None:
            rep = clifford_generators(t.d, t.symmetry)
        return bott_index(t, rep, gap_threshold)
    raise DomainError(f"unknown index method {method!r}")


def index_stability(
    t: MatrixTuple,
    rep: CliffordRep | None = None,
    trials: int = 100,
    radius: float = 0.0,
    method: str = "auto",
    gap_threshold: float = GAP_THRESHOLD,
    seed: int = 0,
) -> bool:
    """True iff the index is identical across class-preserving perturbations.

    radius should stay below gap/(3d); the base index must be valid
    (GapTooSmall propagates otherwise).
    """
    from .generate import perturb  # local import to avoid a cycle

    base = compute_index(t, method=method, gap_threshold=gap_threshold, rep=rep)
    if radius > base.gap / (3 * max(t.d, 1)):
        raise DomainError("perturbation radius exceeds the stability bound gap/(3d)")
    for k in range(trials):
        moved = perturb(t, radius, seed=seed + k)
        try:
            res = compute_index(moved, method=method, gap_threshold=gap_threshold, rep=rep)
        except GapTooSmall:
            return False
        if res.value != base.value or res.group != base.group:
            return False
    return True
