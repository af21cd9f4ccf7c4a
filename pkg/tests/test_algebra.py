import numpy as np
import pytest
from hypothesis import given
from numpy.testing import assert_allclose

from conftest import unit_quaternions
from knotgate.algebra import (
    ID2,
    QI,
    QJ,
    QK,
    QUNIT_1,
    QUNIT_I,
    QUNIT_J,
    QUNIT_K,
    SIGMA_X,
    SIGMA_Z,
    Quaternion,
    axis_angle,
    distance,
    herm_exp,
    int_det,
    int_inverse_sl2,
    int_matrix,
    is_su2,
    matrix_from_json,
    matrix_to_json,
    qmul,
    quat_distance,
    quat_to_su2,
    random_su2_array,
    su2_from_array,
    su2_to_quat,
    tensor,
    unitarity_defect,
)
from knotgate.errors import NotHermitian, NotUnit


def series_exp(h, t, order=30):
    """Truncated power series for exp(i t H)."""
    a = 1j * t * np.asarray(h, dtype=complex)
    out = np.eye(len(a), dtype=complex)
    term = np.eye(len(a), dtype=complex)
    for n in range(1, order + 1):
        term = term @ a / n
        out = out + term
    return out


def svd_distance(u, v):
    return min(np.linalg.svd(u - v, compute_uv=False)[0], np.linalg.svd(u + v, compute_uv=False)[0])


H_HOPF = tensor(SIGMA_X, SIGMA_Z) - tensor(SIGMA_Z, SIGMA_X)


class TestQuaternion:
    def test_basis_matrices(self):
        assert_allclose(quat_to_su2(QUNIT_1), ID2)
        assert_allclose(quat_to_su2(QUNIT_K), [[0, 1j], [1j, 0]])
        assert_allclose(quat_to_su2(QUNIT_I), QI)
        assert_allclose(quat_to_su2(QUNIT_J), QJ)

    def test_half_turn_about_i(self):
        q = Quaternion(1 / np.sqrt(2), 1 / np.sqrt(2), 0, 0)
        assert_allclose(quat_to_su2(q), np.diag([np.exp(1j * np.pi / 4), np.exp(-1j * np.pi / 4)]), atol=1e-15)

    @pytest.mark.parametrize(
        "p, q, expected",
        [
            (QUNIT_I, QUNIT_J, QUNIT_K),
            (QUNIT_J, QUNIT_K, QUNIT_I),
            (QUNIT_K, QUNIT_I, QUNIT_J),
            (QUNIT_I, QUNIT_I, -QUNIT_1),
            (QUNIT_J, QUNIT_J, -QUNIT_1),
            (QUNIT_K, QUNIT_K, -QUNIT_1),
            (QUNIT_J, QUNIT_I, -QUNIT_K),
        ],
    )
    def test_hamilton_table(self, p, q, expected):
        assert p * q == expected

    def test_not_unit(self):
        with pytest.raises(NotUnit):
            quat_to_su2(Quaternion(1, 1, 0, 0))

    @given(unit_quaternions(), unit_quaternions())
    def test_product_matches_matrices(self, p, q):
        lhs = quat_to_su2(qmul(p, q))
        rhs = quat_to_su2(p) @ quat_to_su2(q)
        assert_allclose(lhs, rhs, atol=1e-12)

    @given(unit_quaternions())
    def test_inverse(self, q):
        qq = Quaternion.from_array(q)
        assert_allclose((qq * qq.inverse()).as_array(), [1, 0, 0, 0], atol=1e-12)

    @given(unit_quaternions())
    def test_round_trip(self, q):
        m = quat_to_su2(q)
        assert is_su2(m)
        assert_allclose(su2_to_quat(m).as_array(), q, atol=1e-15)


class TestTensorAndExp:
    def test_identity(self):
        assert_allclose(tensor(ID2, ID2), np.eye(4))

    def test_xz_blocks(self):
        xz = tensor(SIGMA_X, SIGMA_Z)
        zero = np.zeros((2, 2))
        assert_allclose(xz, np.block([[zero, SIGMA_Z], [SIGMA_Z, zero]]))
        assert_allclose(xz @ xz, np.eye(4))

    def test_zero_time(self, rng):
        h = rng.standard_normal((4, 4))
        assert_allclose(herm_exp(h + h.T, 0.0), np.eye(4))

    @pytest.mark.parametrize("t", [np.pi / 4, 0.3, 1.9])
    def test_series_oracle(self, t):
        assert np.abs(herm_exp(H_HOPF, t) - series_exp(H_HOPF, t)).max() <= 1e-10

    def test_group_property(self, rng):
        for t1, t2 in rng.uniform(-2, 2, size=(10, 2)):
            lhs = herm_exp(H_HOPF, t1) @ herm_exp(H_HOPF, t2)
            assert np.abs(lhs - herm_exp(H_HOPF, t1 + t2)).max() <= 1e-10

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            herm_exp(np.array([[0, 1], [0, 0]]), 1.0)

    def test_unitary_output(self, rng):
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        assert unitarity_defect(herm_exp(a + a.conj().T, 0.7)) < 1e-12


class TestDistance:
    def test_self_and_sign(self, rng):
        u = su2_from_array(random_su2_array(rng))
        assert distance(u, u) == 0
        assert distance(u, -u) == 0

    def test_identity_vs_i(self):
        assert distance(ID2, QI) == pytest.approx(np.sqrt(2), abs=1e-15)
        assert distance(ID2, QI) == pytest.approx(svd_distance(ID2, QI), abs=1e-15)

    @given(unit_quaternions(), unit_quaternions())
    def test_svd_oracle(self, p, q):
        u, v = quat_to_su2(p), quat_to_su2(q)
        assert abs(distance(u, v) - svd_distance(u, v)) <= 1e-12
        assert abs(quat_distance(p, q) - distance(u, v)) <= 1e-12
        assert distance(u, v) <= 2 ** 0.5 + 1e-12

    def test_haar_sampling_shapes(self, rng):
        qs = random_su2_array(rng, 1000)
        assert qs.shape == (1000, 4)
        assert_allclose(np.linalg.norm(qs, axis=1), 1.0, atol=1e-14)
        # mean of each component vanishes under Haar measure
        assert np.abs(qs.mean(axis=0)).max() < 0.1


class TestAxisAngle:
    @pytest.mark.parametrize("axis", [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0)])
    def test_recovers_rotation(self, axis):
        n = np.array(axis, dtype=float) / np.linalg.norm(axis)
        theta = 1.1
        ns = n[0] * SIGMA_X + n[1] * np.array([[0, -1j], [1j, 0]]) + n[2] * SIGMA_Z
        u = np.cos(theta / 2) * ID2 - 1j * np.sin(theta / 2) * ns
        phase, angle, got = axis_angle(np.exp(0.4j) * u)
        assert phase == pytest.approx(0.4)
        assert angle == pytest.approx(theta)
        assert_allclose(got, n, atol=1e-12)

    def test_quaternion_units(self):
        # k = exp(-i pi/2 (-sigma_x))
        _, angle, axis = axis_angle(QK)
        assert angle == pytest.approx(np.pi)
        assert_allclose(axis, [-1, 0, 0], atol=1e-12)


class TestIntegerMatrices:
    def test_exact_inverse(self):
        m = int_matrix([[2, 3], [1, 2]])
        assert int_det(m) == 1
        assert (m.dot(int_inverse_sl2(m)) == int_matrix([[1, 0], [0, 1]])).all()

    def test_rejects_det(self):
        with pytest.raises(ValueError):
            int_inverse_sl2(int_matrix([[2, 0], [0, 1]]))


def test_json_round_trip(rng):
    u = su2_from_array(random_su2_array(rng))
    assert_allclose(matrix_from_json(matrix_to_json(u)), u)
    assert matrix_to_json(int_matrix([[0, 1], [-1, 0]])) == [[0, 1], [-1, 0]]
