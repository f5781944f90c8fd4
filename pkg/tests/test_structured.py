import json

import numpy as np
import pytest

from halmos_lab.errors import DimensionError, DomainError, StructureError
from halmos_lab.structured import (
    MatrixTuple,
    SymmetryClass,
    check_class,
    clamp_spectrum,
    class_defect,
    hermitize,
    is_quaternionic,
    matrix_from_json,
    matrix_to_json,
    op_norm,
    quaternion_embed,
    sharp_dual,
    symplectic_form,
    tuple_from_json,
    tuple_to_json,
)

rng = np.random.default_rng(20240817)


def random_hermitian(n):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return hermitize(a)


def random_self_dual(n):
    a = random_hermitian(n)
    b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    b = (b - b.T) / 2
    return quaternion_embed(a, b)


class TestSharpDual:
    def test_two_by_two(self):
        x = np.array([[1, 2], [3, 4]], dtype=complex)
        expected = np.array([[4, -2], [-3, 1]], dtype=complex)
        assert np.array_equal(sharp_dual(x), expected)

    def test_identity_fixed(self):
        assert np.array_equal(sharp_dual(np.eye(6)), np.eye(6))

    def test_involution_exact(self):
        for n in (1, 2, 5):
            x = rng.standard_normal((2 * n, 2 * n)) + 1j * rng.standard_normal((2 * n, 2 * n))
            assert np.array_equal(sharp_dual(sharp_dual(x)), x)

    def test_odd_dimension_rejected(self):
        with pytest.raises(DimensionError):
            sharp_dual(np.eye(3))


class TestQuaternionEmbed:
    def test_scalar_i(self):
        y = quaternion_embed(np.array([[1j]]), np.array([[0]]))
        assert np.array_equal(y, np.diag([1j, -1j]))

    def test_scalar_j(self):
        y = quaternion_embed(np.array([[0]]), np.array([[1]]))
        assert np.array_equal(y, np.array([[0, -1], [1, 0]], dtype=complex))

    def test_embedding_is_quaternionic(self):
        for _ in range(25):
            a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            assert is_quaternionic(quaternion_embed(a, b))

    def test_diag_counterexample(self):
        assert not is_quaternionic(np.diag([1.0, 2.0]).astype(complex))

    def test_identity_quaternionic(self):
        assert is_quaternionic(np.eye(2, dtype=complex))

    def test_mismatched_blocks(self):
        with pytest.raises(DimensionError):
            quaternion_embed(np.eye(2), np.eye(3))

    def test_structure_relation(self):
        # J conj(Y) J^-1 = Y for embedded Y
        a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        y = quaternion_embed(a, b)
        j = symplectic_form(2)
        assert op_norm(j @ y.conj() @ np.linalg.inv(j) - y) < 1e-13


def test_self_dual_iff_self_adjoint_on_embedded_image():
    # the two residuals agree to 1e-12 on random embedded matrices
    for _ in range(1000):
        n = int(rng.integers(1, 4))
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        y = quaternion_embed(a, b)
        r_adjoint = op_norm(y - y.conj().T)
        r_dual = op_norm(y - sharp_dual(y))
        assert abs(r_adjoint - r_dual) <= 1e-12 * max(op_norm(y), 1.0)


class TestHermitize:
    def test_nilpotent(self):
        x = np.array([[0, 1], [0, 0]], dtype=complex)
        assert np.allclose(hermitize(x), [[0, 0.5], [0.5, 0]])

    def test_fixed_point(self):
        h = random_hermitian(5)
        assert np.allclose(hermitize(h), h)

    def test_distance_identity(self):
        x = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        lhs = op_norm(hermitize(x) - x)
        rhs = op_norm(x - x.conj().T) / 2
        assert lhs <= rhs * (1 + 1e-12)


class TestClampSpectrum:
    def test_diagonal(self):
        out = clamp_spectrum(np.diag([2.0, 0.5, -3.0]).astype(complex))
        assert np.allclose(out, np.diag([1.0, 0.5, -1.0]))

    def test_contraction_fixed(self):
        h = random_hermitian(6)
        h = h / (op_norm(h) + 1.0)
        assert np.allclose(clamp_spectrum(h), h, atol=1e-12)

    def test_idempotent(self):
        h = 3.0 * random_hermitian(7)
        once = clamp_spectrum(h)
        twice = clamp_spectrum(once)
        assert op_norm(twice - once) < 1e-12

    def test_output_contraction(self):
        for _ in range(10):
            h = 5 * random_hermitian(5)
            assert op_norm(clamp_spectrum(h)) <= 1 + 1e-10

    def test_class_preservation(self):
        real = 3 * (rng.standard_normal((6, 6)))
        real = ((real + real.T) / 2).astype(complex)
        out = clamp_spectrum(real)
        assert class_defect(out, SymmetryClass.REAL_SYMMETRIC) <= 1e-10
        sd = 3 * random_self_dual(3)
        out = clamp_spectrum(sd)
        assert class_defect(out, SymmetryClass.QUATERNION_SELF_DUAL) <= 1e-10

    def test_rejects_non_self_adjoint(self):
        with pytest.raises(StructureError):
            clamp_spectrum(np.array([[0, 1], [0, 0]], dtype=complex))


class TestOpNorm:
    def test_diag(self):
        assert op_norm(np.diag([3.0, -5.0])) == pytest.approx(5.0)

    def test_zero(self):
        assert op_norm(np.zeros((4, 4))) == 0.0

    def test_nilpotent(self):
        assert op_norm(np.array([[0, 2], [0, 0]])) == pytest.approx(2.0)


class TestMatrixTuple:
    def test_valid_tuple(self):
        h = random_hermitian(4)
        t = MatrixTuple(SymmetryClass.COMPLEX_HERMITIAN, (h,))
        assert t.d == 1 and t.n == 4

    def test_rejects_nonhermitian(self):
        with pytest.raises(StructureError):
            MatrixTuple(SymmetryClass.COMPLEX_HERMITIAN,
                        (np.array([[0, 1], [0, 0]], dtype=complex),))

    def test_rejects_wrong_class(self):
        h = random_hermitian(4)  # generic Hermitian is not self-dual
        with pytest.raises(StructureError):
            MatrixTuple(SymmetryClass.QUATERNION_SELF_DUAL, (h,))

    def test_rejects_mixed_dims(self):
        with pytest.raises(DimensionError):
            MatrixTuple(SymmetryClass.COMPLEX_HERMITIAN,
                        (random_hermitian(3), random_hermitian(4)))

    def test_direct_sum_self_dual(self):
        t = MatrixTuple(SymmetryClass.QUATERNION_SELF_DUAL, (random_self_dual(2),))
        s = t.direct_sum(t)
        assert s.n == 2 * t.n
        check_class(s.matrices[0], SymmetryClass.QUATERNION_SELF_DUAL)


class TestJson:
    def test_matrix_roundtrip_exact(self):
        m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        back = matrix_from_json(json.loads(json.dumps(matrix_to_json(m))))
        assert np.array_equal(back, m)

    def test_tuple_roundtrip_exact(self):
        t = MatrixTuple(SymmetryClass.QUATERNION_SELF_DUAL,
                        (random_self_dual(2), random_self_dual(2)))
        back = tuple_from_json(json.loads(json.dumps(tuple_to_json(t))))
        assert back.symmetry is t.symmetry
        for a, b in zip(back.matrices, t.matrices):
            assert np.array_equal(a, b)

    def test_malformed_rejected(self):
        with pytest.raises(DomainError):
            matrix_from_json({"rows": 2, "cols": 2, "re": [1, 2, 3]})

    def test_class_labels(self):
        assert SymmetryClass.from_label("R") is SymmetryClass.REAL_SYMMETRIC
        assert SymmetryClass.from_label("QuaternionSelfDual") is SymmetryClass.QUATERNION_SELF_DUAL
        with pytest.raises(DomainError):
            SymmetryClass.from_label("X")
