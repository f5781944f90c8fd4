"""Matrix spheres from symmetric tensor powers of a gamma system.

For an odd-size gamma system g_1..g_{2k+1} on C^m, the level-ell operators

    G_a = (second quantization of g_a on the ell-boson sector) / ell

satisfy sum_a G_a^2 = c * I exactly (a Casimir identity, asserted at build
time) and pairwise commutators of size O(1/ell); normalized by sqrt(c) they
form a matrix sphere.  Odd coordinate counts d use the d-generator system
directly; even d takes the first d coordinates of the (d+1)-system and
compresses them to a spectral window of the last one (an equatorial band,
which is where the odd-sphere families live).

The one-particle antiunitary C = U K lifts to the boson sector with square
(U conj(U))^ell, which is how the class of the family is steered: odd
levels inherit a quaternionic structure from U conj(U) = -1, even levels a
real one.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb, sqrt

import numpy as np

from .cliffords import complex_gammas, quaternionic_intertwiner
from .errors import DomainError, StructureError
from .structured import op_norm


@lru_cache(maxsize=32)
def boson_basis(ell: int, modes: int) -> tuple:
    """Occupation tuples (n_1..n_modes) with sum ell, lexicographic order."""
    if modes == 1:
        return ((ell,),)
    out = []
    for first in range(ell, -1, -1):
        for rest in boson_basis(ell - first, modes - 1):
            out.append((first,) + rest)
    return tuple(out)


def second_quantized(h: np.ndarray, ell: int) -> np.ndarray:
    """Restriction of sum_ij h_ij b_i^dag b_j to the ell-boson sector."""
    m = h.shape[0]
    basis = boson_basis(ell, m)
    index = {n: a for a, n in enumerate(basis)}
    dim = len(basis)
    out = np.zeros((dim, dim), dtype=complex)
    for a, n in enumerate(basis):
        for j in range(m):
            if n[j] == 0:
                continue
            for i in range(m):
                hij = h[i, j]
                if hij == 0:
                    continue
                if i == j:
                    out[a, a] += hij * n[j]
                else:
                    shifted = list(n)
                    shifted[j] -= 1
                    shifted[i] += 1
                    b = index[tuple(shifted)]
                    out[b, a] += hij * sqrt((n[i] + 1) * n[j])
    return out


def _monomial_decomposition(u: np.ndarray) -> tuple[list[int], list[complex]]:
    """Permutation and phases of a monomial matrix (one nonzero per column)."""
    m = u.shape[0]
    perm, phases = [], []
    for j in range(m):
        col = u[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if len(nz) != 1:
            raise DomainError("structure matrix is not monomial")
        perm.append(int(nz[0]))
        phases.append(complex(col[nz[0]]))
    return perm, phases


def lift_antiunitary(u: np.ndarray, ell: int) -> np.ndarray:
    """Matrix S of the boson-sector lift of C = U K (so the lift is S K).

    U must be monomial; the lift sends |n> to prod_j phase_j^{n_j} |pi n>.
    """
    m = u.shape[0]
    perm, phases = _monomial_decomposition(u)
    basis = boson_basis(ell, m)
    index = {n: a for a, n in enumerate(basis)}
    dim = len(basis)
    s = np.zeros((dim, dim), dtype=complex)
    for a, n in enumerate(basis):
        target = [0] * m
        phase = 1.0 + 0j
        for j, nj in enumerate(n):
            target[perm[j]] += nj
            phase *= phases[j] ** nj
        s[index[tuple(target)], a] = phase
    return s


def sphere_generators(count: int, ell: int) -> tuple[list[np.ndarray], np.ndarray | None, int]:
    """Level-ell matrix sphere for an odd-count gamma system.

    Returns (normalized generators G_a with sum G_a^2 = I exactly, the
    one-particle structure matrix U lifted to the sector, and the sign of
    the lifted antiunitary's square).  The lift is None when the gamma
    system carries no monomial intertwiner.
    """
    if count % 2 == 0:
        raise DomainError("sphere_generators needs an odd gamma count")
    if ell < 1:
        raise DomainError("level must be >= 1")
    gammas = complex_gammas(count)
    raw = [second_quantized(g, ell) for g in gammas]
    total = sum(g @ g for g in raw)
    dim = raw[0].shape[0]
    scale = float(total[0, 0].real)
    if op_norm(total - scale * np.eye(dim)) > 1e-9 * scale:
        raise StructureError("sum of squares is not scalar on the symmetric sector")
    gens = [g / sqrt(scale) for g in raw]

    u = quaternionic_intertwiner(gammas)
    if u is None:
        return gens, None, 0
    lift = lift_antiunitary(u, ell)
    square = lift @ lift.conj()
    if op_norm(square - np.eye(dim)) < 1e-10:
        sign = 1
    elif op_norm(square + np.eye(dim)) < 1e-10:
        sign = -1
    else:
        raise StructureError("antiunitary lift does not square to +-1")
    return gens, lift, sign


def sector_dimension(count: int, ell: int) -> int:
    m = complex_gammas(count)[0].shape[0]
    return comb(ell + m - 1, m - 1)
