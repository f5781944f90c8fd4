"""Anticommuting Hermitian involutions (gamma systems) with class structure.

The complex generators come from the usual Pauli tensor chain

    g_{2j-1} = s3^(j-1) (x) s1 (x) I...,   g_{2j} = s3^(j-1) (x) s2 (x) I...,
    g_{2k+1} = s3^k,

so every entry is exactly 0, +-1 or +-i.  A class attachment is an
antiunitary C = U K with U conj(g) U^-1 = g for every generator;
C^2 = U conj(U) is +1 (real structure) or -1 (quaternionic structure).
For the real class, generators that are not already real are realified to
real symmetric matrices of twice the size (exactly, entry by entry).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .structured import SymmetryClass, op_norm

_PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _tensor(factors) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for f in factors:
        out = np.kron(out, f)
    return out


def complex_gammas(d: int) -> list[np.ndarray]:
    """d mutually anticommuting Hermitian involutions of dimension 2^floor(d/2).

    Even d uses floor(d/2) Pauli pairs; odd d appends the chirality element
    s3^(x)k, so complex_gammas(d+1) extends complex_gammas(d) for even d.
    """
    if d < 1 or d > 8:
        raise DomainError(f"supported generator counts are 1..8, got {d}")
    if d == 1:
        return [_PAULI[3].copy()]
    k = d // 2
    gammas = []
    for j in range(1, k + 1):
        pre = [3] * (j - 1)
        post = [0] * (k - j)
        gammas.append(_tensor([_PAULI[i] for i in pre + [1] + post]))
        gammas.append(_tensor([_PAULI[i] for i in pre + [2] + post]))
    gammas.append(_tensor([_PAULI[3]] * k))
    return gammas[:d]


def quaternionic_intertwiner(gammas) -> np.ndarray | None:
    """Pauli-tensor U with U conj(g) U^-1 = g for all g and U conj(U) = -1."""
    dim = gammas[0].shape[0]
    k = dim.bit_length() - 1
    for combo in itertools.product(range(4), repeat=k):
        u = _tensor([_PAULI[i] for i in combo])
        if any(op_norm(u @ g.conj() @ u.conj().T - g) > 1e-12 for g in gammas):
            continue
        if op_norm(u @ u.conj() + np.eye(dim)) < 1e-12:
            return u
    return None


def realify(m: np.ndarray) -> np.ndarray:
    """Real form [[Re, -Im], [Im, Re]] of a complex matrix (doubles the size)."""
    top = np.hstack([m.real, -m.imag])
    bot = np.hstack([m.imag, m.real])
    return np.vstack([top, bot]).astype(complex)


@dataclass(frozen=True)
class CliffordRep:
    """d anticommuting Hermitian involutions, with an optional antiunitary attachment.

    real_structure is the unitary U of C = U K when one is attached;
    structure_sign is U conj(U) = +-1 (None when no attachment).
    """

    d: int
    dim: int
    gammas: tuple
    symmetry: SymmetryClass
    real_structure: np.ndarray | None = None
    structure_sign: int | None = None

    def check(self, tol: float = 1e-12) -> None:
        eye = np.eye(self.dim)
        for i, gi in enumerate(self.gammas):
            if op_norm(gi - gi.conj().T) > tol:
                raise DomainError(f"generator {i} is not self-adjoint")
            for j, gj in enumerate(self.gammas):
                anti = gi @ gj + gj @ gi
                expect = 2 * eye if i == j else 0 * eye
                if op_norm(anti - expect) > tol:
                    raise DomainError(f"generators {i},{j} fail the anticommutation relation")


def clifford_generators(d: int, symmetry: SymmetryClass) -> CliffordRep:
    """Gamma system for d generators adapted to the symmetry class.

    ComplexHermitian: the complex irreducible system as-is.
    RealSymmetric: real symmetric generators (realified when the complex
    system is not already real).
    QuaternionSelfDual: complex generators plus a quaternionic antiunitary
    attachment; DomainError when the system admits none.
    """
    gammas = complex_gammas(d)
    dim = gammas[0].shape[0]
    if symmetry is SymmetryClass.COMPLEX_HERMITIAN:
        rep = CliffordRep(d, dim, tuple(gammas), symmetry)
    elif symmetry is SymmetryClass.QUATERNION_SELF_DUAL:
        u = quaternionic_intertwiner(gammas)
        if u is None:
            raise DomainError(
                f"no quaternionic structure commutes with the {d}-generator system; "
                "the self-dual compression is not defined for this d"
            )
        rep = CliffordRep(d, dim, tuple(gammas), symmetry, u, -1)
    else:
        if all(op_norm(g.imag) == 0.0 for g in gammas):
            reals = tuple(gammas)
        else:
            reals = tuple(realify(g) for g in gammas)
        rep = CliffordRep(d, reals[0].shape[0], reals, symmetry,
                          np.eye(reals[0].shape[0], dtype=complex), 1)
    rep.check()
    return rep
