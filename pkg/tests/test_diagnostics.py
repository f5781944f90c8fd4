import numpy as np
import pytest

from halmos_lab.diagnostics import (
    commutator_defect,
    contraction_defect,
    diagnose,
    pair_table,
    sphere_defect,
)
from halmos_lab.generate import (
    perturb,
    point_evaluation_family,
    random_point_set,
    random_structure_conjugation,
    rng_stream,
)
from halmos_lab.structured import MatrixTuple, SymmetryClass

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def test_commuting_diagonal_tuple_zero():
    t = MatrixTuple(SymmetryClass.REAL_SYMMETRIC,
                    (np.diag([1.0, 2.0]).astype(complex), np.diag([3.0, 4.0]).astype(complex)))
    assert commutator_defect(t) == 0.0


def test_pauli_pair_is_two():
    # oracle: [sx, sz] = [[0, -2], [2, 0]], operator norm 2 (singular values 2, 2)
    t = MatrixTuple(SymmetryClass.COMPLEX_HERMITIAN, (SX, SZ))
    assert commutator_defect(t) == pytest.approx(2.0, abs=1e-14)


def test_single_matrix_zero():
    t = MatrixTuple(SymmetryClass.COMPLEX_HERMITIAN, (SX,))
    assert commutator_defect(t) == 0.0


def test_sphere_defect_point_family():
    t = point_evaluation_family(random_point_set(3, 7, seed=1), SymmetryClass.REAL_SYMMETRIC)
    assert sphere_defect(t) <= 1e-12


def test_sphere_defect_zero_tuple():
    z = np.zeros((3, 3), dtype=complex)
    t = MatrixTuple(SymmetryClass.REAL_SYMMETRIC, (z, z))
    assert sphere_defect(t) == pytest.approx(1.0)


def test_sphere_defect_scalar_tuple():
    t = MatrixTuple(SymmetryClass.REAL_SYMMETRIC,
                    (0.6 * np.eye(2, dtype=complex), 0.8 * np.eye(2, dtype=complex)))
    assert sphere_defect(t) <= 1e-12


def test_contraction_defect_scaled():
    from halmos_lab.generate import SpherePointSet

    pset = SpherePointSet(2, np.array([[1.0, 0.0], [0.0, 1.0]]))
    t = point_evaluation_family(pset, SymmetryClass.REAL_SYMMETRIC)
    doubled = t.map(lambda m: 2 * m)
    report = diagnose(doubled)
    assert report.contraction_defect == pytest.approx(1.0, abs=1e-12)


def test_diagnose_commuting_family_all_zero():
    t = point_evaluation_family(random_point_set(4, 6, seed=3), SymmetryClass.QUATERNION_SELF_DUAL)
    report = diagnose(t)
    assert report.commutator_defect <= 1e-12
    assert report.sphere_defect <= 1e-12
    assert report.contraction_defect <= 1e-12


def test_pair_table_symmetric_zero_diagonal():
    t = point_evaluation_family(random_point_set(3, 4, seed=4), SymmetryClass.REAL_SYMMETRIC)
    t = perturb(t, 0.1, seed=5)
    table = pair_table(t)
    assert np.array_equal(table, table.T)
    assert np.all(np.diag(table) == 0.0)
    assert np.all(table >= 0.0)


def test_perturbation_triangle_bound():
    t = point_evaluation_family(random_point_set(3, 8, seed=6), SymmetryClass.REAL_SYMMETRIC)
    base = commutator_defect(t)
    for eps in (0.01, 0.1, 0.3):
        moved = perturb(t, eps, seed=7)
        assert commutator_defect(moved) <= base + 4 * eps + 2 * eps ** 2 + 1e-12


def test_unitary_invariance():
    gen = rng_stream(8, 5)
    for sym in SymmetryClass:
        t = perturb(point_evaluation_family(random_point_set(3, 4, seed=9), sym), 0.2, seed=10)
        base = diagnose(t)
        q = random_structure_conjugation(sym, t.n, gen)
        rotated = MatrixTuple(sym, tuple(q.conj().T @ m @ q for m in t.matrices))
        report = diagnose(rotated)
        assert report.commutator_defect == pytest.approx(base.commutator_defect, abs=1e-10)
        assert report.sphere_defect == pytest.approx(base.sphere_defect, abs=1e-10)
        assert report.contraction_defect == pytest.approx(base.contraction_defect, abs=1e-10)


def test_direct_sum_takes_max():
    a = perturb(point_evaluation_family(random_point_set(3, 4, seed=11), SymmetryClass.REAL_SYMMETRIC),
                0.3, seed=12)
    b = perturb(point_evaluation_family(random_point_set(3, 5, seed=13), SymmetryClass.REAL_SYMMETRIC),
                0.05, seed=14)
    s = a.direct_sum(b)
    assert commutator_defect(s) == pytest.approx(
        max(commutator_defect(a), commutator_defect(b)), abs=1e-12)
    assert sphere_defect(s) == pytest.approx(
        max(sphere_defect(a), sphere_defect(b)), abs=1e-12)
