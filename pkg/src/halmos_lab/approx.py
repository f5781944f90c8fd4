"""Search for a nearby exactly commuting tuple of the same symmetry class.

The optimizer runs Jacobi-style sweeps of structure-group rotations that
minimize the joint off-diagonal Frobenius energy of Q* H_r Q (the smooth
surrogate); the answer K_r = Q diag(Q* H_r Q) Q* commutes exactly by
construction and stays in class because the rotations are exact group
elements and the retained diagonals are real.  Distances are reported in
operator norm (with the Frobenius value logged alongside).  The result is
an upper bound on the true distance to commuting: the objective is
nonconvex and restarts only lower the bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._kernels import jacobi_sweep, offdiag_energy_numpy
from .diagnostics import commutator_defect, sphere_defect
from .errors import DomainError, ObstructionContradiction, StructureError
from .generate import GeneratorSpec, perturb, random_structure_conjugation, rng_stream
from .errors import GapTooSmall
from .indices import GAP_THRESHOLD, compute_index
from .structured import (
    MatrixTuple,
    SymmetryClass,
    check_class,
    op_norm,
    quaternion_blocks,
    quaternion_embed,
)

_ACTIVE = {
    SymmetryClass.REAL_SYMMETRIC: 1,
    SymmetryClass.COMPLEX_HERMITIAN: 2,
    SymmetryClass.QUATERNION_SELF_DUAL: 4,
}


def to_component_stack(t: MatrixTuple) -> np.ndarray:
    """(d, 4, N, N) quaternion component stack of a tuple (N halves for H)."""
    if t.symmetry is SymmetryClass.QUATERNION_SELF_DUAL:
        # the embedding [[a, -conj(b)], [b, conj(a)]] realizes q = a + j b,
        # so with Hamilton's ij = k the components are (Re a, Im a, Re b, -Im b)
        n = t.n // 2
        out = np.zeros((t.d, 4, n, n))
        for r, h in enumerate(t.matrices):
            a, b = quaternion_blocks(h)
            out[r, 0] = a.real
            out[r, 1] = a.imag
            out[r, 2] = b.real
            out[r, 3] = -b.imag
        return out
    out = np.zeros((t.d, 4, t.n, t.n))
    for r, h in enumerate(t.matrices):
        out[r, 0] = np.asarray(h).real
        if t.symmetry is SymmetryClass.COMPLEX_HERMITIAN:
            out[r, 1] = np.asarray(h).imag
    return out


def from_component_stack(stack: np.ndarray, symmetry: SymmetryClass) -> list[np.ndarray]:
    """Complex matrices from a component stack (single matrix per leading index)."""
    mats = []
    for comp in stack:
        a = comp[0] + 1j * comp[1]
        if symmetry is SymmetryClass.QUATERNION_SELF_DUAL:
            b = comp[2] - 1j * comp[3]
            mats.append(quaternion_embed(a, b))
        else:
            mats.append(a.astype(complex))
    return mats


@dataclass(frozen=True)
class ApproxOptions:
    max_sweeps: int = 60
    restarts: int = 4
    tol_offdiag: float = 1e-12
    seed: int = 0

    def __post_init__(self):
        if self.max_sweeps < 1 or self.restarts < 1 or self.tol_offdiag <= 0:
            raise DomainError("counts must be positive and tol_offdiag > 0")


@dataclass(frozen=True)
class ApproxResult:
    K: MatrixTuple
    distance: float
    distance_fro: float
    frame: np.ndarray
    sweeps_used: int
    converged: bool
    restart_id: int
    offdiag: float
    detail: dict = field(default_factory=dict)


def _run_single(t: MatrixTuple, opts: ApproxOptions, restart: int):
    symmetry = t.symmetry
    active = _ACTIVE[symmetry]
    stack = to_component_stack(t)
    d, _, n, _ = stack.shape
    if restart == 0:
        frame0 = np.eye(t.n, dtype=complex)
    else:
        gen = rng_stream(opts.seed, 3, restart)
        frame0 = random_structure_conjugation(symmetry, t.n, gen)
        rotated = MatrixTuple(symmetry, tuple(
            frame0.conj().T @ h @ frame0 for h in t.matrices))
        stack = to_component_stack(rotated)

    q = np.zeros((4, n, n))
    q[0] = np.eye(n)
    total = float(np.sum(stack ** 2))
    off = offdiag_energy_numpy(stack)
    scale = max(total, 1e-300)
    sweeps = 0
    converged = off / scale <= opts.tol_offdiag ** 2
    while sweeps < opts.max_sweeps and not converged:
        rotations = jacobi_sweep(stack, q, active, 1e-16)
        sweeps += 1
        new_off = offdiag_energy_numpy(stack)
        if new_off > off * (1 + 1e-9) + 1e-30:
            raise StructureError("off-diagonal energy increased during a sweep")
        off = new_off
        converged = off / scale <= opts.tol_offdiag ** 2
        if rotations == 0:
            break

    # canonical ordering: lexicographic over the joint diagonals, then index
    diags = np.array([stack[r, 0].diagonal() for r in range(d)])
    keys = tuple(np.round(diags[r], 12) for r in range(d - 1, -1, -1))
    order = np.lexsort((np.arange(n),) + keys) if d else np.arange(n)

    rot = from_component_stack(q[None, ...], symmetry)[0]
    if symmetry is SymmetryClass.QUATERNION_SELF_DUAL:
        perm = np.concatenate([order, order + n])
    else:
        perm = order
    rot = rot[:, perm]
    frame = frame0 @ rot

    mats = []
    for r in range(d):
        diag = diags[r][order]
        if symmetry is SymmetryClass.QUATERNION_SELF_DUAL:
            diag = np.concatenate([diag, diag])
        mats.append((frame * diag) @ frame.conj().T)
    k_mats = []
    for m in mats:
        if symmetry is SymmetryClass.REAL_SYMMETRIC:
            m = ((m + m.conj().T) / 2).real.astype(complex)
        elif symmetry is SymmetryClass.QUATERNION_SELF_DUAL:
            a, b = quaternion_blocks((m + m.conj().T) / 2)
            m = quaternion_embed((a + a.conj().T) / 2, (b - b.T) / 2)
        else:
            m = (m + m.conj().T) / 2
        k_mats.append(m)
    k = MatrixTuple(symmetry, tuple(k_mats))

    dist = max(op_norm(h - km) for h, km in zip(t.matrices, k.matrices)) if d else 0.0
    dist_f = max(float(np.linalg.norm(np.asarray(h) - km))
                 for h, km in zip(t.matrices, k.matrices)) if d else 0.0
    return ApproxResult(k, dist, dist_f, frame, sweeps, bool(converged), restart, off)


def nearest_commuting(t: MatrixTuple, opts: ApproxOptions | None = None) -> ApproxResult:
    """Best exactly-commuting approximant over restarts (an upper bound)."""
    opts = opts or ApproxOptions()
    if t.d == 0:
        return ApproxResult(t, 0.0, 0.0, np.eye(0), 0, True, 0, 0.0)
    best = None
    for restart in range(opts.restarts):
        res = _run_single(t, opts, restart)
        if best is None or (res.distance, res.restart_id) < (best.distance, best.restart_id):
            best = res
    return best


def commuting_certificate(k: MatrixTuple) -> bool:
    """True iff the tuple commutes to 1e-12 and passes its class invariants."""
    if k.d == 0:
        return True
    try:
        for m in k.matrices:
            check_class(m, k.symmetry)
    except StructureError:
        return False
    scale = max(max(op_norm(m) for m in k.matrices), 1.0)
    return commutator_defect(k) <= 1e-12 * scale


# ---------------------------------------------------------------------------
# Experiment harness.
# ---------------------------------------------------------------------------

EXPERIMENT_COLUMNS = (
    "family", "class", "d", "n", "commutator_defect", "sphere_defect",
    "index_group", "index_value", "index_gap", "index_valid",
    "best_distance", "best_distance_fro", "restarts", "converged", "error",
)


def halmos_experiment(specs, opts: ApproxOptions | None = None,
                      gap_threshold: float = GAP_THRESHOLD) -> list[dict]:
    """Chart delta versus achievable approximation distance across families.

    One row per generator spec; per-row errors are recorded, not raised.
    The obstruction-consistency guard does raise: a valid nonzero index
    together with a commuting family closer than the stability radius
    would contradict local constancy of the index.
    """
    opts = opts or ApproxOptions()
    rows = []
    for i, spec in enumerate(specs):
        if not isinstance(spec, GeneratorSpec):
            spec = GeneratorSpec.from_json(spec)
        row = {c: "" for c in EXPERIMENT_COLUMNS}
        row["family"] = spec.name or f"{spec.kind}-{spec.symmetry.short}-d{spec.d}-{i}"
        row["class"] = spec.symmetry.short
        row["d"] = spec.d
        try:
            t = spec.build()
            row["n"] = t.n
            delta = commutator_defect(t)
            row["commutator_defect"] = delta
            row["sphere_defect"] = sphere_defect(t)
            index_err = None
            try:
                res = compute_index(t, gap_threshold=gap_threshold)
                row["index_group"] = res.group
                row["index_value"] = res.value
                row["index_gap"] = res.gap
                row["index_valid"] = res.valid
            except (GapTooSmall, DomainError, StructureError) as exc:
                index_err = exc
                row["index_group"] = "Trivial"
                row["index_valid"] = False
            approx = nearest_commuting(t, opts)
            row["best_distance"] = approx.distance
            row["best_distance_fro"] = approx.distance_fro
            row["restarts"] = opts.restarts
            row["converged"] = approx.converged
            if (index_err is None and row["index_valid"] and row["index_value"] != 0):
                # a commuting family inside the stability radius would force
                # the (locally constant) index to zero
                radius = row["index_gap"] / (3 * max(t.d, 1))
                if approx.distance < radius:
                    raise ObstructionContradiction(
                        f"nonzero index with commuting family at distance "
                        f"{approx.distance:.3e} < gap/(3d) = {radius:.3e}"
                    )
        except ObstructionContradiction:
            raise
        except Exception as exc:  # noqa: BLE001 - per-row error reporting
            row["error"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return rows
