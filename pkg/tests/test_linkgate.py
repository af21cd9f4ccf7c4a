import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from knotgate.algebra import SIGMA_X, SIGMA_Z, unitarity_defect
from knotgate.errors import UnknownName, ValidationError
from knotgate.linkgate import (
    LinkGateSpec,
    entangling_power,
    evolve,
    link_hamiltonian,
    scan_local_times,
    schmidt_coefficients,
)

HOPF = LinkGateSpec.from_catalog("hopf")
WHITEHEAD = LinkGateSpec.from_catalog("whitehead")


def reduced_density_min_eig(state):
    """Schmidt oracle: smallest eigenvalue of the first-qubit reduced density matrix."""
    psi = np.asarray(state).reshape(2, 2)
    rho = np.einsum("ij,kj->ik", psi, psi.conj())
    return float(np.linalg.eigvalsh(rho)[0])


def series_exp(h, t, order=30):
    a = 1j * t * h
    out = term = np.eye(4, dtype=complex)
    for n in range(1, order + 1):
        term = term @ a / n
        out = out + term
    return out


class TestHamiltonian:
    def test_hopf(self):
        expected = np.kron(SIGMA_X, SIGMA_Z) - np.kron(SIGMA_Z, SIGMA_X)
        assert (link_hamiltonian(HOPF) == expected).all()

    def test_whitehead(self):
        expected = 2 * np.kron(SIGMA_X, SIGMA_Z) - 2 * np.kron(SIGMA_Z, SIGMA_X)
        assert (link_hamiltonian(WHITEHEAD) == expected).all()

    def test_unlink(self):
        assert (link_hamiltonian(LinkGateSpec.from_catalog("unlink2")) == 0).all()

    def test_hermitian(self):
        h = link_hamiltonian(HOPF)
        assert (h == h.conj().T).all()

    def test_counts_add(self):
        assert (HOPF + HOPF).over_count == WHITEHEAD.over_count
        assert (link_hamiltonian(HOPF + HOPF) == link_hamiltonian(WHITEHEAD)).all()

    def test_knot_is_not_a_link(self):
        with pytest.raises(UnknownName):
            LinkGateSpec.from_catalog("trefoil")

    def test_negative_counts(self):
        with pytest.raises(ValidationError):
            LinkGateSpec("bad", -1, 0)


class TestEvolve:
    def test_zero_time(self):
        assert (evolve(HOPF, 0.0).unitary == np.eye(4)).all()

    def test_series_oracle(self):
        u = evolve(HOPF, np.pi / 4).unitary
        assert np.abs(u - series_exp(link_hamiltonian(HOPF), np.pi / 4)).max() <= 1e-10

    @pytest.mark.parametrize("t", np.linspace(-2.0, 3.0, 20))
    def test_time_rescaling(self, t):
        diff = evolve(WHITEHEAD, t).unitary - evolve(HOPF, 2 * t).unitary
        assert np.abs(diff).max() <= 1e-12

    @given(st.integers(0, 4), st.integers(0, 4), st.floats(-10, 10))
    def test_unitary(self, over, under, t):
        assert unitarity_defect(evolve(LinkGateSpec("x", over, under), t).unitary) <= 1e-12

    def test_commuting_terms_factorize(self):
        t = 0.37
        xz = np.kron(SIGMA_X, SIGMA_Z)
        zx = np.kron(SIGMA_Z, SIGMA_X)
        expected = series_exp(xz, t) @ series_exp(-zx, t)
        assert np.abs(evolve(HOPF, t).unitary - expected).max() <= 1e-10


class TestEntanglement:
    def test_identity_gate(self):
        assert entangling_power(np.eye(4)) == 0

    @pytest.mark.parametrize("t", np.linspace(0.05, np.pi / 4, 9))
    def test_positive_on_open_interval(self, t):
        u = evolve(HOPF, t).unitary
        lam = entangling_power(u)
        assert lam > 0
        assert lam == pytest.approx(reduced_density_min_eig(u[:, 0]), abs=1e-12)

    def test_closed_form(self):
        # |det psi| = sin^2(2t)/2 for U(t)|00>, so lambda_min(pi/4) = 1/2
        for t in np.linspace(0, np.pi, 13):
            d = np.sin(2 * t) ** 2 / 2
            expected = (1 - np.sqrt(max(0.0, 1 - 4 * d**2))) / 2
            assert entangling_power(evolve(HOPF, t)) == pytest.approx(expected, abs=1e-12)
        assert entangling_power(evolve(HOPF, np.pi / 4)) == pytest.approx(0.5, abs=1e-12)

    def test_schmidt_normalized(self, rng):
        psi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        lam = schmidt_coefficients(psi)
        assert lam.sum() == pytest.approx(1.0)
        assert lam[0] >= lam[1]

    def test_scan_roots(self):
        roots, table = scan_local_times(HOPF)
        assert roots == pytest.approx([0.0, np.pi / 2, np.pi], abs=1e-6)
        for t in roots:
            assert entangling_power(evolve(HOPF, t)) <= 1e-10
        assert len(table) == 721

    def test_scan_whitehead_twice_as_fast(self):
        roots, _ = scan_local_times(WHITEHEAD)
        assert roots == pytest.approx([k * np.pi / 4 for k in range(5)], abs=1e-6)
