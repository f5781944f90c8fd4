"""Matrix family generators.

Point-evaluation families are the exactly commuting baseline: evaluate the
sphere coordinates at finitely many points and inflate per class.

Dirac compression families realize the nontrivial obstruction at finite
size, by two constructions chosen per parity of the coordinate count d:

* odd d (matrix spheres S^{d-1} of even dimension): the symmetric-tensor
  quantization of fuzzy.sphere_generators — spin-L matrices for d = 3 and
  their higher Clifford analogues — with sum H_i^2 = I holding exactly;

* even d (odd spheres): the spectral-localizer tuple of a (d-1)-dimensional
  lattice Dirac Hamiltonian with a topological mass term: d-1 position
  observables scaled by a coupling plus the Hamiltonian, symmetrically
  rescaled by (sum H_r^2)^(-1/4) onto the sphere.  The rescale is a
  congruence, so determinant signs and localizer signatures are unchanged
  by it, and the index the family carries is the lattice model's strong
  invariant.

The class structure (real / self-dual) is installed by an antiunitary
C = U K that commutes with the whole family: a C-fixed basis makes the
family real symmetric, a Kramers-paired basis makes it self-dual.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product as _iproduct

import numpy as np

from .cliffords import _PAULI, _tensor, complex_gammas, realify
from .diagnostics import commutator_defect
from .errors import DimensionError, DomainError, StructureError
from .fuzzy import sphere_generators
from .structured import (
    MatrixTuple,
    SymmetryClass,
    hermitize,
    op_norm,
    project_to_class,
    quaternion_embed,
)


def rng_stream(seed: int, *stream: int) -> np.random.Generator:
    """Counter-based splittable generator: one 64-bit seed, spawn keys per task."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class SpherePointSet:
    """Finite set of unit vectors in R^d with multiplicities."""

    d: int
    points: np.ndarray          # (k, d)
    multiplicities: tuple = ()

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.shape[1] != self.d:
            raise DimensionError(f"points live in R^{pts.shape[1]}, expected R^{self.d}")
        norms = np.einsum("ij,ij->i", pts, pts)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise DomainError("every point must satisfy sum x_i^2 = 1 to 1e-12")
        mult = self.multiplicities or tuple([1] * pts.shape[0])
        if len(mult) != pts.shape[0] or any(m < 1 for m in mult):
            raise DomainError("need one multiplicity >= 1 per point")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "multiplicities", tuple(int(m) for m in mult))


def random_point_set(d: int, count: int, seed: int) -> SpherePointSet:
    gen = rng_stream(seed, 1)
    pts = gen.standard_normal((count, d))
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    return SpherePointSet(d, pts)


def point_evaluation_family(pset: SpherePointSet, symmetry: SymmetryClass) -> MatrixTuple:
    """Exactly commuting diagonal family from point evaluations.

    Real and complex classes use 1x1 blocks per evaluation; the self-dual
    class uses quaternionic scalar blocks x_j * I_2 (in the 2N embedding,
    both half-diagonals carry the same values).
    """
    vals = np.repeat(pset.points, pset.multiplicities, axis=0)  # (n, d)
    n = vals.shape[0]
    mats = []
    for j in range(pset.d):
        diag = vals[:, j]
        if symmetry is SymmetryClass.QUATERNION_SELF_DUAL:
            m = np.zeros((2 * n, 2 * n), dtype=complex)
            np.fill_diagonal(m[:n, :n], diag)
            np.fill_diagonal(m[n:, n:], diag)
        else:
            m = np.diag(diag).astype(complex)
        mats.append(m)
    return MatrixTuple(symmetry, tuple(mats))


def sphere_normalize(t: MatrixTuple) -> MatrixTuple:
    """Rescale a commuting family onto the sphere: H_i -> S^-1/4 H_i S^-1/4.

    S = sum H_r^2 must be invertible (a common zero of the family leaves
    the scaling function undefined).
    """
    if t.d == 0:
        raise DomainError("cannot normalize an empty tuple")
    if commutator_defect(t) > 1e-10:
        raise StructureError("sphere_normalize needs an (exactly) commuting tuple")
    s = np.zeros((t.n, t.n), dtype=complex)
    for h in t.matrices:
        s += h @ h
    w, v = np.linalg.eigh(s)
    if w.min() <= 0:
        raise DomainError("sum of squares is singular; normalization undefined")
    quarter = (v * w ** -0.25) @ v.conj().T
    mats = []
    for h in t.matrices:
        m = quarter @ h @ quarter
        mats.append(project_to_class(m, t.symmetry))
    return MatrixTuple(t.symmetry, tuple(mats))


# ---------------------------------------------------------------------------
# Structure-adapted orthonormal bases.
# ---------------------------------------------------------------------------

def _kramers_basis(vectors: np.ndarray, structure: np.ndarray) -> np.ndarray:
    """Orthonormal basis (e_1..e_h, Ce_1..Ce_h) of the span of the given columns.

    C(w) = structure @ conj(w) is antiunitary with C^2 = -1 and preserves
    the span; <v, Cv> = 0 automatically, so the span has even dimension.
    """
    cols = [vectors[:, j] for j in range(vectors.shape[1])]
    es, fs = [], []

    def _project_out(v):
        for w in es + fs:
            v = v - w * (w.conj() @ v)
        return v

    for v in cols:
        v = _project_out(v)
        nv = np.linalg.norm(v)
        if nv < 1e-8:
            continue
        v = v / nv
        f = structure @ v.conj()
        f = _project_out(f)
        nf = np.linalg.norm(f)
        if nf < 0.5:
            raise StructureError("subspace is not invariant under the structure map")
        es.append(v)
        fs.append(f / nf)
    if 2 * len(es) != vectors.shape[1]:
        raise StructureError("subspace is not Kramers-paired")
    return np.stack(es + fs, axis=1)


def _real_basis(vectors: np.ndarray, structure: np.ndarray) -> np.ndarray:
    """Orthonormal basis of C-fixed vectors spanning the given column span.

    C(w) = structure @ conj(w) is antiunitary with C^2 = +1 preserving the
    span; in the returned basis every C-real operator has real entries.
    """
    r = vectors.shape[1]
    chosen: list[np.ndarray] = []
    for j in range(r):
        v = vectors[:, j]
        for cand in (v + structure @ v.conj(), 1j * (v - structure @ v.conj())):
            if len(chosen) == r:
                break
            w = cand
            for u in chosen:
                w = w - u * (u.conj() @ w)
            nw = np.linalg.norm(w)
            if nw > 1e-6:
                chosen.append(w / nw)
    if len(chosen) != r:
        raise StructureError("could not build a real basis of the subspace")
    return np.stack(chosen, axis=1)


# ---------------------------------------------------------------------------
# Even d: spectral-localizer tuple of a lattice Dirac insulator.
# ---------------------------------------------------------------------------

_MASS_CENTER = 1.0          # inside the topological phase (0, 2)
_COUPLING = {2: 0.45}       # position coupling by lattice width, default 0.2


def _axis_operator(op: np.ndarray, axis: int, lat: int, n: int) -> np.ndarray:
    factors = [np.eye(n)] * lat
    factors[axis] = op
    return reduce(np.kron, factors)


def _lattice_tuple(d: int, L: int,
                   coupling: float | None = None) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """(d-1)-dimensional Dirac insulator localizer tuple, complex form.

    Returns the d matrices (kappa X_1 .. kappa X_{d-1}, H / ||H||) after the
    symmetric sphere rescale, plus the gamma system used for the spinor
    structure (needed by the class-structure search).
    """
    lat = d - 1
    n = L + 1
    gammas = complex_gammas(d)
    m = gammas[0].shape[0]
    shift = np.zeros((n, n))
    for k in range(n - 1):
        shift[k + 1, k] = 1.0
    sin_op = (shift - shift.T) / 2j
    cos_op = (shift + shift.T) / 2
    pos_op = np.diag(np.arange(n) - (n - 1) / 2) / max((n - 1) / 2, 1.0)

    eye_lat = np.eye(n ** lat)
    ham = sum(np.kron(_axis_operator(sin_op, r, lat, n), gammas[r]) for r in range(lat))
    mass = (_MASS_CENTER - lat) * eye_lat
    mass = mass + sum(_axis_operator(cos_op, r, lat, n) for r in range(lat))
    ham = ham + np.kron(mass, gammas[lat])
    ham = ham / op_norm(ham)

    kappa = coupling if coupling is not None else _COUPLING.get(n, 0.2)
    mats = [kappa * np.kron(_axis_operator(pos_op, r, lat, n), np.eye(m))
            for r in range(lat)]
    mats.append(ham)

    # symmetric sphere rescale: a congruence, so index data is unchanged
    total = sum(h @ h for h in mats)
    w, v = np.linalg.eigh(total)
    if w.min() <= 1e-10:
        raise StructureError("localizer tuple is degenerate; cannot rescale")
    quarter = (v * w ** -0.25) @ v.conj().T
    mats = [quarter @ h @ quarter for h in mats]
    top = max(op_norm(h) for h in mats)
    if top > 1.0:
        mats = [h / top for h in mats]
    return [hermitize(h) for h in mats], gammas


def _insulator_structure(gammas) -> tuple[np.ndarray, int] | None:
    """Antiunitary C = (1 (x) U) K commuting with the localizer tuple.

    Positions are real diagonals and the lattice sine is imaginary, so U
    must flip the d-1 current slots and fix the mass slot under conjugation:
    U conj(g_r) U^-1 = -g_r for r < d, = +g_d for the mass.  Returns
    (U, sign of U conj(U)) or None.
    """
    dim = gammas[0].shape[0]
    k = dim.bit_length() - 1
    want = [-1] * (len(gammas) - 1) + [1]
    for combo in _iproduct(range(4), repeat=k):
        u = _tensor([_PAULI[i] for i in combo])
        ok = True
        for g, s in zip(gammas, want):
            if op_norm(u @ g.conj() @ u.conj().T - s * g) > 1e-12:
                ok = False
                break
        if not ok:
            continue
        ucu = u @ u.conj()
        if op_norm(ucu - np.eye(dim)) < 1e-12:
            return u, 1
        if op_norm(ucu + np.eye(dim)) < 1e-12:
            return u, -1
    return None


# ---------------------------------------------------------------------------
# The generator.
# ---------------------------------------------------------------------------

def dirac_compression_family(d: int, L: int, symmetry: SymmetryClass,
                             coupling: float | None = None) -> MatrixTuple:
    """Almost commuting d-tuple near the unit sphere carrying the sphere's topology.

    Odd d: level-controlled matrix sphere (sum H_i^2 = I exactly), level
    2L for real/complex (spin L when d = 3) and 2L+1 for the self-dual
    class (half-integer level, Kramers structure).  Even d: topological
    insulator localizer tuple on a (d-1)-dimensional lattice of width L+1;
    coupling overrides the per-width position coupling (a calibration knob
    — smaller couplings trade spectral gap for commutator defect).
    Class/d combinations without a compatible antiunitary structure raise
    DomainError.
    """
    if d < 2 or L < 1:
        raise DomainError("need d >= 2 and L >= 1")
    if d > 7:
        raise DomainError("coordinate counts up to 7 are supported")

    if d % 2:
        if symmetry is SymmetryClass.QUATERNION_SELF_DUAL:
            probe = sphere_generators(d, 1)
            if probe[1] is None or probe[2] != -1:
                raise DomainError(
                    f"the d={d} gamma system carries no quaternionic structure; "
                    "no self-dual matrix sphere at this d"
                )
            gens, lift, _ = sphere_generators(d, 2 * L + 1)
            basis = _kramers_basis(np.eye(gens[0].shape[0], dtype=complex), lift)
            mats = tuple(project_to_class(basis.conj().T @ g @ basis, symmetry)
                         for g in gens)
            return MatrixTuple(symmetry, mats)
        gens, lift, sign = sphere_generators(d, 2 * L)
        if symmetry is SymmetryClass.COMPLEX_HERMITIAN:
            return MatrixTuple(symmetry, tuple(hermitize(g) for g in gens))
        # real class: the lifted structure squares to +1 at even level, so a
        # C-fixed basis exists whenever the gamma system has an intertwiner;
        # realify otherwise
        if lift is not None:
            if sign != 1:
                raise StructureError("even-level lift should square to +1")
            basis = _real_basis(np.eye(gens[0].shape[0], dtype=complex), lift)
            mats = tuple(project_to_class(basis.conj().T @ g @ basis, symmetry)
                         for g in gens)
            return MatrixTuple(symmetry, mats)
        return MatrixTuple(symmetry, tuple(project_to_class(realify(g), symmetry)
                                           for g in gens))

    mats, gammas = _lattice_tuple(d, L, coupling)
    if symmetry is SymmetryClass.COMPLEX_HERMITIAN:
        return MatrixTuple(symmetry, tuple(mats))
    if symmetry is SymmetryClass.REAL_SYMMETRIC:
        return MatrixTuple(symmetry, tuple(project_to_class(realify(h), symmetry)
                                           for h in mats))
    found = _insulator_structure(gammas)
    if found is None or found[1] != -1:
        raise DomainError(
            f"the d={d} insulator carries no quaternionic structure; "
            "no self-dual localizer tuple at this d"
        )
    u = found[0]
    sites = mats[0].shape[0] // gammas[0].shape[0]
    lift = np.kron(np.eye(sites), u)
    basis = _kramers_basis(np.eye(mats[0].shape[0], dtype=complex), lift)
    out = tuple(project_to_class(basis.conj().T @ h @ basis, symmetry) for h in mats)
    return MatrixTuple(symmetry, out)


def perturb(t: MatrixTuple, eps: float, seed: int) -> MatrixTuple:
    """Class-preserving self-adjoint perturbation of operator norm exactly eps.

    Deterministic per seed; eps = 0 returns the tuple unchanged.
    """
    if eps < 0:
        raise DomainError("perturbation size must be nonnegative")
    if eps == 0.0 or t.d == 0:
        return t
    gen = rng_stream(seed, 2)
    mats = []
    for h in t.matrices:
        e = _random_direction(t.symmetry, t.n, gen)
        mats.append(np.asarray(h) + e * (eps / op_norm(e)))
    return MatrixTuple(t.symmetry, tuple(mats))


def _random_direction(symmetry: SymmetryClass, n: int, gen: np.random.Generator) -> np.ndarray:
    if symmetry is SymmetryClass.REAL_SYMMETRIC:
        a = gen.standard_normal((n, n))
        return ((a + a.T) / 2).astype(complex)
    if symmetry is SymmetryClass.COMPLEX_HERMITIAN:
        a = gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))
        return hermitize(a)
    if n % 2:
        raise DimensionError("self-dual perturbations need even dimension")
    half = n // 2
    a = gen.standard_normal((half, half)) + 1j * gen.standard_normal((half, half))
    b = gen.standard_normal((half, half)) + 1j * gen.standard_normal((half, half))
    a = hermitize(a)
    b = (b - b.T) / 2
    return quaternion_embed(a, b)


def random_structure_conjugation(symmetry: SymmetryClass, n: int,
                                 gen: np.random.Generator) -> np.ndarray:
    """Haar-ish random element of the class's structure group.

    Orthogonal for the real class, unitary for the complex class, and
    quaternionic-unitary (commuting with J conj) for the self-dual class.
    """
    if symmetry is SymmetryClass.REAL_SYMMETRIC:
        q, r = np.linalg.qr(gen.standard_normal((n, n)))
        return (q * np.sign(np.diag(r))).astype(complex)
    if symmetry is SymmetryClass.COMPLEX_HERMITIAN:
        z = gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))
        q, r = np.linalg.qr(z)
        return q * (np.diag(r) / np.abs(np.diag(r)))
    import scipy.linalg

    # quaternionic-unitary = exp of a quaternionic anti-Hermitian matrix,
    # i.e. embed(A, B) with A anti-Hermitian and B symmetric
    if n % 2:
        raise DimensionError("quaternionic-unitary matrices have even dimension")
    half = n // 2
    a = gen.standard_normal((half, half)) + 1j * gen.standard_normal((half, half))
    b = gen.standard_normal((half, half)) + 1j * gen.standard_normal((half, half))
    skew = quaternion_embed((a - a.conj().T) / 2, (b + b.T) / 2)
    return scipy.linalg.expm(skew)


@dataclass(frozen=True)
class GeneratorSpec:
    """Declarative family recipe used by the CLI and the experiment harness."""

    kind: str                   # "point" | "dirac" | "perturbed"
    symmetry: SymmetryClass
    d: int
    L: int = 2
    npoints: int = 8
    noise: float = 0.0
    seed: int = 0
    name: str = ""
    base_kind: str = "point"    # for kind == "perturbed"

    def build(self) -> MatrixTuple:
        if self.kind == "point":
            pset = random_point_set(self.d, self.npoints, self.seed)
            return point_evaluation_family(pset, self.symmetry)
        if self.kind == "dirac":
            return dirac_compression_family(self.d, self.L, self.symmetry)
        if self.kind == "perturbed":
            base = GeneratorSpec(self.base_kind, self.symmetry, self.d, self.L,
                                 self.npoints, 0.0, self.seed).build()
            return perturb(base, self.noise, self.seed)
        raise DomainError(f"unknown generator kind {self.kind!r}")

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "class": self.symmetry.value,
            "d": self.d,
            "L": self.L,
            "npoints": self.npoints,
            "noise": self.noise,
            "seed": self.seed,
            "name": self.name or f"{self.kind}-{self.symmetry.short}-d{self.d}",
            "base_kind": self.base_kind,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GeneratorSpec":
        known = {"kind", "class", "d", "L", "npoints", "noise", "seed", "name", "base_kind"}
        unknown = set(obj) - known
        if unknown:
            raise DomainError(f"unknown generator fields: {sorted(unknown)}")
        return cls(
            kind=obj["kind"],
            symmetry=SymmetryClass.from_label(obj["class"]),
            d=int(obj["d"]),
            L=int(obj.get("L", 2)),
            npoints=int(obj.get("npoints", 8)),
            noise=float(obj.get("noise", 0.0)),
            seed=int(obj.get("seed", 0)),
            name=str(obj.get("name", "")),
            base_kind=str(obj.get("base_kind", "point")),
        )
