import numpy as np
import pytest

from halmos_lab._kernels import (
    USING_NUMBA,
    _sweep_numpy,
    jacobi_sweep,
    offdiag_energy_numpy,
)
from halmos_lab.approx import (
    ApproxOptions,
    commuting_certificate,
    from_component_stack,
    halmos_experiment,
    nearest_commuting,
    to_component_stack,
)
from halmos_lab.diagnostics import commutator_defect
from halmos_lab.errors import DomainError
from halmos_lab.generate import (
    GeneratorSpec,
    dirac_compression_family,
    perturb,
    point_evaluation_family,
    random_point_set,
)
from halmos_lab.structured import MatrixTuple, SymmetryClass, op_norm

R = SymmetryClass.REAL_SYMMETRIC
C = SymmetryClass.COMPLEX_HERMITIAN
H = SymmetryClass.QUATERNION_SELF_DUAL


def test_component_stack_roundtrip():
    for sym in (R, C, H):
        t = perturb(point_evaluation_family(random_point_set(3, 4, seed=1), sym), 0.2, seed=2)
        stack = to_component_stack(t)
        back = from_component_stack(stack, sym)
        for a, b in zip(back, t.matrices):
            assert op_norm(a - np.asarray(b)) < 1e-13


@pytest.mark.parametrize("sym", [R, C, H])
def test_exactly_commuting_input(sym):
    t = point_evaluation_family(random_point_set(3, 6, seed=3), sym)
    res = nearest_commuting(t, ApproxOptions(restarts=2))
    assert res.distance <= 1e-10
    assert commuting_certificate(res.K)


def test_single_matrix_diagonalizable():
    rng = np.random.default_rng(5)
    a = rng.standard_normal((7, 7))
    t = MatrixTuple(R, (((a + a.T) / 2).astype(complex),))
    res = nearest_commuting(t, ApproxOptions(restarts=1))
    assert res.distance <= 1e-10


def test_output_invariants():
    for sym in (R, C, H):
        t = perturb(point_evaluation_family(random_point_set(3, 5, seed=6), sym), 0.15, seed=7)
        res = nearest_commuting(t, ApproxOptions(restarts=2, max_sweeps=30))
        assert commutator_defect(res.K) <= 1e-12
        assert commuting_certificate(res.K)
        # frame actually conjugates: distance consistent
        assert res.distance <= 0.15 * (1 + 1e-6) + 1e-9


def test_near_commuting_real_pair_n50():
    base = point_evaluation_family(random_point_set(2, 50, seed=8), R)
    t = perturb(base, 2.5e-4, seed=9)
    assert commutator_defect(t) <= 1e-3
    res = nearest_commuting(t, ApproxOptions(restarts=2, max_sweeps=40))
    assert res.distance <= 0.1


def test_certificate_rejects_pauli_pair():
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sz = np.diag([1.0, -1.0]).astype(complex)
    assert not commuting_certificate(MatrixTuple(C, (sx, sz)))


def test_certificate_vacuous_for_empty_tuple():
    assert commuting_certificate(MatrixTuple(C, ()))


def test_options_validation():
    with pytest.raises(DomainError):
        ApproxOptions(restarts=0)
    with pytest.raises(DomainError):
        ApproxOptions(tol_offdiag=0.0)


def test_numba_and_numpy_sweeps_agree():
    t = perturb(point_evaluation_family(random_point_set(3, 5, seed=10), H), 0.2, seed=11)
    a1 = to_component_stack(t)
    a2 = a1.copy()
    n = a1.shape[2]
    q1 = np.zeros((4, n, n))
    q1[0] = np.eye(n)
    q2 = q1.copy()
    r1 = jacobi_sweep(a1, q1, 4, 1e-16)
    r2 = _sweep_numpy(a2, q2, 4, 1e-16)
    assert r1 == r2
    assert offdiag_energy_numpy(a1) == pytest.approx(offdiag_energy_numpy(a2), rel=1e-9)
    if USING_NUMBA:
        assert np.allclose(a1, a2, atol=1e-12)


def test_monotone_objective_enforced():
    # the driver asserts per-sweep monotonicity internally; a full run on a
    # messy family must not trip it
    t = perturb(point_evaluation_family(random_point_set(4, 6, seed=12), H), 0.4, seed=13)
    res = nearest_commuting(t, ApproxOptions(restarts=2, max_sweeps=25))
    assert res.distance > 0


def test_experiment_rows_and_contradiction_guard():
    specs = [
        GeneratorSpec("point", H, 4, npoints=4, seed=1, name="pt-h"),
        GeneratorSpec("perturbed", R, 2, npoints=8, noise=0.01, seed=2, name="pert-r"),
        GeneratorSpec("dirac", C, 3, L=2, name="spin"),
        GeneratorSpec("dirac", H, 4, L=2, name="s3"),
    ]
    rows = halmos_experiment(specs, ApproxOptions(restarts=2, max_sweeps=25))
    assert [r["family"] for r in rows] == ["pt-h", "pert-r", "spin", "s3"]
    assert all(r["error"] == "" for r in rows)
    by_name = {r["family"]: r for r in rows}
    assert by_name["pt-h"]["index_value"] == 0
    assert by_name["s3"]["index_value"] == 1
    assert by_name["s3"]["best_distance"] > by_name["pert-r"]["best_distance"]


def test_experiment_records_errors_per_row():
    specs = [GeneratorSpec("dirac", H, 3, L=1, name="impossible")]
    rows = halmos_experiment(specs)
    assert rows[0]["error"].startswith("DomainError")
