"""How far a matrix tuple is from commuting contractions on the unit sphere.

All defects are measured in operator norm; Frobenius values are carried
along as optional extra report fields only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .structured import MatrixTuple, op_norm


def commutator_defect(t: MatrixTuple) -> float:
    """max over pairs r < s of ||H_r H_s - H_s H_r||."""
    worst = 0.0
    for r in range(t.d):
        for s in range(r + 1, t.d):
            hr, hs = t.matrices[r], t.matrices[s]
            worst = max(worst, op_norm(hr @ hs - hs @ hr))
    return worst


def sphere_defect(t: MatrixTuple) -> float:
    """||sum_r H_r^2 - I||."""
    if t.d == 0:
        return 1.0
    acc = np.zeros((t.n, t.n), dtype=complex)
    for h in t.matrices:
        acc += h @ h
    return op_norm(acc - np.eye(t.n))


def contraction_defect(t: MatrixTuple) -> float:
    """max(0, max_r ||H_r|| - 1)."""
    if t.d == 0:
        return 0.0
    return max(0.0, max(op_norm(h) for h in t.matrices) - 1.0)


def pair_table(t: MatrixTuple) -> np.ndarray:
    """d x d symmetric table of commutator norms, zero diagonal."""
    table = np.zeros((t.d, t.d))
    for r in range(t.d):
        for s in range(r + 1, t.d):
            hr, hs = t.matrices[r], t.matrices[s]
            table[r, s] = table[s, r] = op_norm(hr @ hs - hs @ hr)
    return table


@dataclass(frozen=True)
class DiagnosticsReport:
    commutator_defect: float
    sphere_defect: float
    contraction_defect: float
    pair_table: np.ndarray
    commutator_defect_fro: float
    sphere_defect_fro: float

    def to_json(self) -> dict:
        return {
            "commutator_defect": self.commutator_defect,
            "sphere_defect": self.sphere_defect,
            "contraction_defect": self.contraction_defect,
            "pair_table": [[float(v) for v in row] for row in self.pair_table],
            "commutator_defect_fro": self.commutator_defect_fro,
            "sphere_defect_fro": self.sphere_defect_fro,
        }


def diagnose(t: MatrixTuple) -> DiagnosticsReport:
    table = pair_table(t)
    fro_comm = 0.0
    for r in range(t.d):
        for s in range(r + 1, t.d):
            hr, hs = t.matrices[r], t.matrices[s]
            fro_comm = max(fro_comm, float(np.linalg.norm(hr @ hs - hs @ hr)))
    if t.d:
        acc = np.zeros((t.n, t.n), dtype=complex)
        for h in t.matrices:
            acc += h @ h
        fro_sphere = float(np.linalg.norm(acc - np.eye(t.n)))
    else:
        fro_sphere = 1.0
    return DiagnosticsReport(
        commutator_defect=float(table.max()) if t.d else 0.0,
        sphere_defect=sphere_defect(t),
        contraction_defect=contraction_defect(t),
        pair_table=table,
        commutator_defect_fro=fro_comm,
        sphere_defect_fro=fro_sphere,
    )
