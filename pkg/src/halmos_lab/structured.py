"""Dense matrices with symmetry-class structure.

Three classes of self-adjoint matrices are supported: real symmetric,
complex Hermitian, and quaternionic matrices realized as self-dual
complex matrices of even dimension.  Quaternionic matrices are stored
only through their 2N x 2N complex embedding

    [[A, -conj(B)], [B, conj(A)]]

so that determinant and spectral routines can run on the complex form.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, DomainError, StructureError

SELF_ADJOINT_RTOL = 1e-12
CLASS_RTOL = 1e-10


class SymmetryClass(enum.Enum):
    """Symmetry class of a self-adjoint matrix family."""

    REAL_SYMMETRIC = "RealSymmetric"
    COMPLEX_HERMITIAN = "ComplexHermitian"
    QUATERNION_SELF_DUAL = "QuaternionSelfDual"

    @classmethod
    def from_label(cls, label: str) -> "SymmetryClass":
        """Accept both the long labels and the shorthand R / C / H."""
        short = {"R": cls.REAL_SYMMETRIC, "C": cls.COMPLEX_HERMITIAN,
                 "H": cls.QUATERNION_SELF_DUAL}
        if label in short:
            return short[label]
        for member in cls:
            if member.value == label:
                return member
        raise DomainError(f"unknown symmetry class {label!r}")

    @property
    def short(self) -> str:
        return {"RealSymmetric": "R", "ComplexHermitian": "C",
                "QuaternionSelfDual": "H"}[self.value]


def as_square_matrix(x) -> np.ndarray:
    m = np.asarray(x, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise DomainError("matrix has non-finite entries")
    return m


def op_norm(x) -> float:
    """Operator (spectral) norm: largest singular value."""
    m = np.asarray(x, dtype=complex)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def hermitize(x) -> np.ndarray:
    """Self-adjoint part (X + X*)/2."""
    m = as_square_matrix(x)
    return (m + m.conj().T) / 2.0


def sharp_dual(x) -> np.ndarray:
    """Block dual X^# = [[D^T, -B^T], [-C^T, A^T]] of an even-dimensional matrix.

    An involution; its fixed points are the (embedded) quaternionic matrices
    when combined with self-adjointness.
    """
    m = as_square_matrix(x)
    n2 = m.shape[0]
    if n2 % 2:
        raise DimensionError("sharp dual needs even dimension")
    n = n2 // 2
    a, b = m[:n, :n], m[:n, n:]
    c, d = m[n:, :n], m[n:, n:]
    out = np.empty_like(m)
    out[:n, :n] = d.T
    out[:n, n:] = -b.T
    out[n:, :n] = -c.T
    out[n:, n:] = a.T
    return out


def symplectic_form(n: int) -> np.ndarray:
    """J = [[0, -I], [I, 0]] of dimension 2n."""
    j = np.zeros((2 * n, 2 * n), dtype=complex)
    j[:n, n:] = -np.eye(n)
    j[n:, :n] = np.eye(n)
    return j


def quaternion_embed(a, b) -> np.ndarray:
    """Embed the quaternionic matrix A + Bj as [[A, -conj(B)], [B, conj(A)]]."""
    a = as_square_matrix(a)
    b = as_square_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"blocks differ in shape: {a.shape} vs {b.shape}")
    n = a.shape[0]
    out = np.empty((2 * n, 2 * n), dtype=complex)
    out[:n, :n] = a
    out[:n, n:] = -b.conj()
    out[n:, :n] = b
    out[n:, n:] = a.conj()
    return out


def quaternion_blocks(x) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of quaternion_embed (the A and B blocks of the embedding)."""
    m = as_square_matrix(x)
    if m.shape[0] % 2:
        raise DimensionError("quaternionic matrices have even dimension")
    n = m.shape[0] // 2
    return m[:n, :n].copy(), m[n:, :n].copy()


def is_quaternionic(x, rtol: float = CLASS_RTOL) -> bool:
    """True iff X = J conj(X) J^-1 up to rtol (X commutes with the j-structure)."""
    m = as_square_matrix(x)
    if m.shape[0] % 2:
        raise DimensionError("quaternionic matrices have even dimension")
    n = m.shape[0] // 2
    a, nb = m[:n, :n], m[:n, n:]
    b, na = m[n:, :n], m[n:, n:]
    resid = max(op_norm(na - a.conj()), op_norm(nb + b.conj()))
    return resid <= rtol * max(op_norm(m), 1e-300)


def class_defect(x, symmetry: SymmetryClass) -> float:
    """Distance (operator norm) of X from its symmetry-class structure.

    Measures only the structural part (realness / self-duality), not
    self-adjointness.
    """
    m = as_square_matrix(x)
    if symmetry is SymmetryClass.REAL_SYMMETRIC:
        return op_norm(m.imag)
    if symmetry is SymmetryClass.COMPLEX_HERMITIAN:
        return 0.0
    return op_norm(m - sharp_dual(m)) / 2.0


def project_to_class(x, symmetry: SymmetryClass) -> np.ndarray:
    """Nearest-in-structure projection: self-adjoint part plus class symmetrization."""
    m = hermitize(x)
    if symmetry is SymmetryClass.REAL_SYMMETRIC:
        return m.real.astype(complex)
    if symmetry is SymmetryClass.QUATERNION_SELF_DUAL:
        return (m + sharp_dual(m)) / 2.0
    return m


def check_class(x, symmetry: SymmetryClass, rtol: float = CLASS_RTOL) -> None:
    """Raise StructureError if X is not (self-adjoint and) in the class."""
    m = as_square_matrix(x)
    scale = max(op_norm(m), 1e-300)
    if op_norm(m - m.conj().T) > 2 * SELF_ADJOINT_RTOL * scale + 1e-300:
        raise StructureError("matrix is not self-adjoint within tolerance")
    if symmetry is SymmetryClass.QUATERNION_SELF_DUAL and m.shape[0] % 2:
        raise StructureError("self-dual matrices need even dimension")
    if class_defect(m, symmetry) > rtol * scale:
        raise StructureError(f"matrix violates {symmetry.value} structure")


def clamp_spectrum(x) -> np.ndarray:
    """Spectral clamp: replace eigenvalues by f(t) = min(max(t, -1), 1).

    Eigenvectors are unchanged, the output is a contraction, and the map is
    idempotent.  Functional calculus commutes with the class structure, so
    realness and self-duality are preserved (re-symmetrized against roundoff).
    """
    m = as_square_matrix(x)
    scale = max(op_norm(m), 1e-300)
    if op_norm(m - m.conj().T) > 2 * SELF_ADJOINT_RTOL * scale + 1e-300:
        raise StructureError("clamp_spectrum needs a self-adjoint matrix")
    h = hermitize(m)
    w, v = np.linalg.eigh(h)
    out = (v * np.clip(w, -1.0, 1.0)) @ v.conj().T
    out = hermitize(out)
    if op_norm(h.imag) <= SELF_ADJOINT_RTOL * scale:
        out = out.real.astype(complex)
    elif h.shape[0] % 2 == 0 and is_quaternionic(h, rtol=SELF_ADJOINT_RTOL):
        out = (out + sharp_dual(out)) / 2.0
    return out


@dataclass(frozen=True)
class MatrixTuple:
    """A d-tuple of N x N self-adjoint matrices in a declared symmetry class."""

    symmetry: SymmetryClass
    matrices: tuple = field(default_factory=tuple)

    def __post_init__(self):
        mats = tuple(as_square_matrix(m) for m in self.matrices)
        if not mats:
            object.__setattr__(self, "matrices", mats)
            return
        n = mats[0].shape[0]
        for m in mats:
            if m.shape[0] != n:
                raise DimensionError("all matrices in a tuple share one dimension")
            check_class(m, self.symmetry)
        for m in mats:
            m.setflags(write=False)
        object.__setattr__(self, "matrices", mats)

    @property
    def d(self) -> int:
        return len(self.matrices)

    @property
    def n(self) -> int:
        return self.matrices[0].shape[0] if self.matrices else 0

    def map(self, f) -> "MatrixTuple":
        return MatrixTuple(self.symmetry, tuple(f(m) for m in self.matrices))

    def direct_sum(self, other: "MatrixTuple") -> "MatrixTuple":
        if other.symmetry is not self.symmetry or other.d != self.d:
            raise DomainError("direct sum needs matching class and tuple length")
        if self.symmetry is SymmetryClass.QUATERNION_SELF_DUAL:
            mats = []
            for x, y in zip(self.matrices, other.matrices):
                ax, bx = quaternion_blocks(x)
                ay, by = quaternion_blocks(y)
                a = _block_diag(ax, ay)
                b = _block_diag(bx, by)
                mats.append(quaternion_embed(a, b))
            return MatrixTuple(self.symmetry, tuple(mats))
        return MatrixTuple(
            self.symmetry,
            tuple(_block_diag(x, y) for x, y in zip(self.matrices, other.matrices)),
        )


def _block_diag(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n, m = a.shape[0], b.shape[0]
    out = np.zeros((n + m, n + m), dtype=complex)
    out[:n, :n] = a
    out[n:, n:] = b
    return out


# ---------------------------------------------------------------------------
# JSON wire format
#
#   matrix: {"rows": N, "cols": N, "re": [...], "im": [...]}   (row-major)
#   tuple:  {"class": "...", "d": d, "n": n, "matrices": [...]}
# ---------------------------------------------------------------------------

def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise DimensionError("only 2-d matrices serialize")
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "re": [float(v) for v in m.real.ravel(order="C")],
        "im": [float(v) for v in m.imag.ravel(order="C")],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        re = np.asarray(obj["re"], dtype=float).reshape(rows, cols)
        im = np.asarray(obj["im"], dtype=float).reshape(rows, cols)
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed matrix JSON: {exc}") from exc
    return re + 1j * im


def tuple_to_json(t: MatrixTuple) -> dict:
    return {
        "class": t.symmetry.value,
        "d": t.d,
        "n": t.n,
        "matrices": [matrix_to_json(m) for m in t.matrices],
    }


def tuple_from_json(obj: dict) -> MatrixTuple:
    try:
        symmetry = SymmetryClass.from_label(obj["class"])
        mats = tuple(matrix_from_json(m) for m in obj["matrices"])
        if int(obj["d"]) != len(mats):
            raise DomainError("tuple JSON: d does not match matrix count")
        if mats and int(obj["n"]) != mats[0].shape[0]:
            raise DomainError("tuple JSON: n does not match matrix dimension")
    except KeyError as exc:
        raise DomainError(f"tuple JSON missing field {exc}") from exc
    return MatrixTuple(symmetry, mats)


def load_tuple(path) -> MatrixTuple:
    with open(path, "r", encoding="utf-8") as fh:
        return tuple_from_json(json.load(fh))
