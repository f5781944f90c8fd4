"""Base modules for the four scalar algebras, degree shifts, degree tables.

The group data below was derived, not copied: the complex part and its
conjugation action are classical, and every self-conjugate group plus every
coupling map was solved out of the three long exact sequences together with
the relation table.  check_relations / check_acyclicity are the oracle for
all of it, and tests/test_crt.py re-runs the derivation of the
self-conjugate groups from scratch.

Degree-0 groups (one period each):

    base R:  O = (Z, Z/2, Z/2, 0, Z, 0, 0, 0)   U = (Z, 0)   T = (Z, Z/2, 0, Z)
    base C:  O = (Z, 0) alternating              U = (Z^2, 0) T = (Z, Z, Z, Z)
    base T:  O = (Z, Z/2, 0, Z) twice            U = (Z, Z)   T = (Z(+)Z/2, Z/2, Z, Z^2)
    base H:  the degree -4 shift of base R.
"""

from __future__ import annotations

from .intmat import IMat
from .modules import (
    FULL_PERIOD,
    OPERATION_SIGNATURES,
    CrtModule,
    CrtOperation,
    GradedAbelianGroup,
    _compose,
)

ALGEBRAS = ("R", "C", "T", "H")


def _op(module_parts: dict, name: str, table) -> CrtOperation:
    """Build an operation from an 8-entry table of row-lists (None = zero map)."""
    src, tgt, shift = OPERATION_SIGNATURES[name]
    mats = []
    for n in range(FULL_PERIOD):
        h = len(module_parts[tgt].factors(n + shift))
        g = len(module_parts[src].factors(n))
        entry = table[n]
        if entry is None:
            mats.append(IMat(h, g))
        else:
            mats.append(IMat(h, g, entry))
    return CrtOperation(name, tuple(mats))


def _identity_table(parts: dict, part: str) -> list:
    return [
        [[1 if i == j else 0 for j in range(len(parts[part].factors(n)))]
         for i in range(len(parts[part].factors(n)))]
        for n in range(FULL_PERIOD)
    ]


def _with_derived_ops(parts: dict, primitive: dict) -> CrtModule:
    """Fill in etaO, etaT, xi, omega from their defining compositions."""
    module = CrtModule(parts["O"], parts["U"], parts["T"], dict(primitive))
    derived = {}
    for name, words in (
        ("etaO", ["tau", "eps"]),
        ("etaT", ["gamma", "betaU", "zeta"]),
        ("xi", ["r", "betaU", "betaU", "c"]),
        ("omega", ["betaT", "gamma", "zeta"]),
    ):
        src = OPERATION_SIGNATURES[name][0]
        mats = []
        for n in range(FULL_PERIOD):
            mat, _, _ = _compose(module, words, src, n)
            mats.append(mat)
        derived[name] = CrtOperation(name, tuple(mats))
    ops = dict(primitive)
    ops.update(derived)
    return CrtModule(parts["O"], parts["U"], parts["T"], ops)


def _base_real() -> CrtModule:
    parts = {
        "O": GradedAbelianGroup(8, ((0,), (2,), (2,), (), (0,), (), (), ())),
        "U": GradedAbelianGroup(2, ((0,), ())),
        "T": GradedAbelianGroup(4, ((0,), (2,), (), (0,))),
    }
    prim = {
        "c": _op(parts, "c", [[[1]], None, [[0]], None, [[2]], None, None, None]),
        "r": _op(parts, "r", [[[2]], None, [[1]], None, [[1]], None, None, None]),
        "eps": _op(parts, "eps", [[[1]], [[1]], None, None, [[2]], None, None, None]),
        "zeta": _op(parts, "zeta", [[[1]], None, None, None, [[1]], None, None, None]),
        "psiU": _op(parts, "psiU", [[[1]], None, [[-1]], None, [[1]], None, [[-1]], None]),
        "psiT": _op(parts, "psiT", [[[1]], [[1]], None, [[-1]], [[1]], [[1]], None, [[-1]]]),
        "gamma": _op(parts, "gamma", [[[1]], None, [[1]], None, [[1]], None, [[1]], None]),
        "tau": _op(parts, "tau", [[[1]], [[1]], None, [[1]], None, None, None, [[2]]]),
        "betaU": _op(parts, "betaU", _identity_table(parts, "U")),
        "betaT": _op(parts, "betaT", _identity_table(parts, "T")),
        "betaO": _op(parts, "betaO", _identity_table(parts, "O")),
    }
    return _with_derived_ops(parts, prim)


def _base_complex() -> CrtModule:
    parts = {
        "O": GradedAbelianGroup(8, ((0,), (), (0,), (), (0,), (), (0,), ())),
        "U": GradedAbelianGroup(2, ((0, 0), ())),
        "T": GradedAbelianGroup(4, ((0,), (0,), (0,), (0,))),
    }
    plus = [[1], [1]]
    minus = [[1], [-1]]
    swap = [[0, 1], [1, 0]]
    nswap = [[0, -1], [-1, 0]]
    prim = {
        "c": _op(parts, "c", [plus, None, minus, None, plus, None, minus, None]),
        "r": _op(parts, "r", [[[1, 1]], None, [[1, -1]], None, [[1, 1]], None, [[1, -1]], None]),
        "eps": _op(parts, "eps", [[[1]], None, [[1]], None, [[1]], None, [[1]], None]),
        "zeta": _op(parts, "zeta", [plus, None, minus, None, plus, None, minus, None]),
        "psiU": _op(parts, "psiU", [swap, None, nswap, None, swap, None, nswap, None]),
        "psiT": _op(parts, "psiT", [[[1]], [[-1]], [[1]], [[-1]], [[1]], [[-1]], [[1]], [[-1]]]),
        "gamma": _op(parts, "gamma", [[[1, 1]], None, [[1, -1]], None, [[1, 1]], None, [[1, -1]], None]),
        "tau": _op(parts, "tau", [None, [[1]], None, [[1]], None, [[1]], None, [[1]]]),
        "betaU": _op(parts, "betaU", _identity_table(parts, "U")),
        "betaT": _op(parts, "betaT", _identity_table(parts, "T")),
        "betaO": _op(parts, "betaO", _identity_table(parts, "O")),
    }
    return _with_derived_ops(parts, prim)


def _base_selfconj() -> CrtModule:
    # T part coordinates: degree 0 is (b, a) with b of order 2 and a free;
    # degree 3 is (x, y), both free.
    parts = {
        "O": GradedAbelianGroup(8, ((0,), (2,), (), (0,), (0,), (2,), (), (0,))),
        "U": GradedAbelianGroup(2, ((0,), (0,))),
        "T": GradedAbelianGroup(4, ((2, 0), (2,), (0,), (0, 0))),
    }
    prim = {
        "c": _op(parts, "c", [[[1]], [[0]], None, [[2]], [[1]], [[0]], None, [[2]]]),
        "r": _op(parts, "r", [[[2]], [[1]], None, [[1]], [[2]], [[1]], None, [[1]]]),
        "eps": _op(parts, "eps",
                   [[[0], [1]], [[1]], None, [[-1], [2]],
                    [[1], [1]], [[1]], None, [[-1], [2]]]),
        "zeta": _op(parts, "zeta",
                    [[[0, 1]], [[0]], [[0]], [[0, 1]],
                     [[0, 1]], [[0]], [[0]], [[0, 1]]]),
        "psiU": _op(parts, "psiU",
                    [[[1]], [[-1]], [[-1]], [[1]], [[1]], [[-1]], [[-1]], [[1]]]),
        "psiT": _op(parts, "psiT",
                    [[[1, 0], [0, 1]], [[1]], [[-1]], [[-1, -1], [0, 1]],
                     [[1, 0], [0, 1]], [[1]], [[-1]], [[-1, -1], [0, 1]]]),
        "gamma": _op(parts, "gamma",
                     [[[1], [0]], [[1], [0]], [[1]], [[1]],
                      [[1], [0]], [[1], [0]], [[1]], [[1]]]),
        "tau": _op(parts, "tau",
                   [[[1, 1]], None, [[1]], [[2, 1]],
                    [[1, 0]], None, [[1]], [[2, 1]]]),
        "betaU": _op(parts, "betaU", _identity_table(parts, "U")),
        "betaT": _op(parts, "betaT", _identity_table(parts, "T")),
        "betaO": _op(parts, "betaO", _identity_table(parts, "O")),
    }
    return _with_derived_ops(parts, prim)


def shift(module: CrtModule, k: int) -> CrtModule:
    """Degree-shift by k: the new degree-n data is the old degree-(n-k) data."""
    k = int(k)
    new_parts = {}
    for label in ("O", "U", "T"):
        part = module.part(label)
        groups = tuple(part.factors(n - k) for n in range(part.period))
        new_parts[label] = GradedAbelianGroup(part.period, groups)
    ops = {}
    for name, op in module.ops.items():
        mats = tuple(op.at(n - k) for n in range(FULL_PERIOD))
        ops[name] = CrtOperation(name, mats)
    return CrtModule(new_parts["O"], new_parts["U"], new_parts["T"], ops)


def make_base_module(alg: str) -> CrtModule:
    """The module of one of the scalar algebras R, C, T, H."""
    alg = alg.upper()
    if alg == "R":
        return _base_real()
    if alg == "C":
        return _base_complex()
    if alg == "T":
        return _base_selfconj()
    if alg == "H":
        return shift(_base_real(), -4)
    raise ValueError(f"unknown algebra {alg!r}; expected one of {ALGEBRAS}")


def free_module(d: int) -> CrtModule:
    """Free module with a single real-part generator in degree -d."""
    return shift(_base_real(), -int(d))


def hom_exists(d: int, target: CrtModule) -> bool:
    """Nonzero degree-0 homomorphism out of free_module(d) exists iff the
    target's real part is nonzero in degree -d."""
    factors = target.MO.factors(-int(d))
    return any(f != 1 for f in factors)


def degree_table(target_alg: str, d_max: int) -> list[tuple[int, bool]]:
    """(d, obstruction_possible) for d = 1..d_max against base(target_alg)."""
    if d_max < 1:
        raise ValueError("d_max must be >= 1")
    base = make_base_module(target_alg)
    return [(d, hom_exists(d, base)) for d in range(1, d_max + 1)]
