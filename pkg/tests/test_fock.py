import math

import numpy as np
import pytest
import scipy.linalg as la
from hypothesis import given, settings
from hypothesis import strategies as st

from vhmlab.ccr import QuasiFreeState, WeylPolynomial, state_fourier, tau_apply
from vhmlab.fock import (
    DimensionError,
    annihilation,
    build_basis,
    creation,
    dense,
    dgamma,
    exp_annihilation,
    exponential_tail_bound,
    exponential_vector,
    fock_dimension,
    gibbs_trace_expectation,
    heisenberg_conjugate,
    herm_expm,
    number_operator,
    top_grade_mass,
    weyl_matrix,
    weyl_truncation_error,
)
from vhmlab.model import build_hamiltonian
from vhmlab.modes import ModeSpace, Source

ONE = ModeSpace([1.0])


class TestBasis:
    @pytest.mark.parametrize("M,N,dim", [(2, 2, 6), (1, 5, 6), (3, 4, 35), (4, 0, 1)])
    def test_dimension(self, M, N, dim):
        basis = build_basis(ModeSpace(np.arange(1.0, M + 1)), N)
        assert basis.dim == dim == fock_dimension(M, N)

    def test_single_mode_states(self):
        assert build_basis(ONE, 5).states == [(n,) for n in range(6)]

    def test_graded_lexicographic(self):
        states = build_basis(ModeSpace([1.0, 2.0]), 2).states
        assert states == [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]

    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 4), st.integers(0, 6))
    def test_index_roundtrip(self, M, N):
        basis = build_basis(ModeSpace(np.ones(M)), N)
        assert basis.dim == math.comb(M + N, N)
        for i, s in enumerate(basis.states):
            assert basis.index[s] == i
            assert sum(s) <= N
        assert np.all(np.diff(basis.grades) >= 0)

    def test_caps(self):
        with pytest.raises(DimensionError):
            build_basis(ModeSpace(np.ones(12)), 10)
        big = build_basis(ModeSpace(np.ones(3)), 25)
        with pytest.raises(DimensionError):
            dense(number_operator(big))


class TestLadder:
    def test_vacuum_annihilated(self):
        basis = build_basis(ModeSpace([1.0, 2.0]), 3)
        assert np.all(annihilation(basis, [1.0, 0.5j]) @ basis.vacuum() == 0)

    def test_single_quantum(self):
        basis = build_basis(ONE, 3)
        a = dense(annihilation(basis, [1.0]))
        assert a[0, 1] == 1.0
        assert a[1, 2] == pytest.approx(math.sqrt(2))

    def test_antilinear(self):
        basis = build_basis(ModeSpace([1.0, 2.0]), 3)
        f = np.array([0.3 + 0.2j, -1j])
        a = dense(annihilation(basis, f))
        a1 = dense(basis.mode_annihilator(0))
        a2 = dense(basis.mode_annihilator(1))
        assert np.allclose(a, np.conj(f[0]) * a1 + np.conj(f[1]) * a2)
        assert np.allclose(dense(creation(basis, f)), a.conj().T)

    def test_ccr_below_cutoff(self):
        rng = np.random.default_rng(0)
        basis = build_basis(ModeSpace([1.0, 2.0, 3.0]), 5)
        f, g = rng.normal(size=3) + 1j * rng.normal(size=3), rng.normal(size=3) + 1j * rng.normal(size=3)
        a, ad = dense(annihilation(basis, g)), dense(creation(basis, f))
        comm = a @ ad - ad @ a
        low = basis.block(basis.N - 1)
        target = np.conj(np.vdot(f, g)) * np.eye(len(low))
        assert np.max(np.abs(comm[np.ix_(low, low)] - target)) < 1e-12

    def test_dgamma(self):
        basis = build_basis(ModeSpace([1.0, 2.0]), 3)
        d = dense(dgamma(basis))
        assert d[0, 0] == 0
        assert d[basis.index[(1, 1)], basis.index[(1, 1)]] == 3.0
        n = dense(number_operator(basis))
        assert np.linalg.norm(d @ n - n @ d) < 1e-14


class TestExponentials:
    def test_herm_expm_identities(self):
        rng = np.random.default_rng(1)
        X = rng.normal(size=(60, 60)) + 1j * rng.normal(size=(60, 60))
        H = (X + X.conj().T) / math.sqrt(8 * 60)
        assert np.allclose(herm_expm(np.zeros((4, 4)), 1.0), np.eye(4))
        assert np.allclose(herm_expm(H, 0.0), np.eye(60))
        prod = herm_expm(H, 0.3 + 0.1j) @ herm_expm(H, -0.3 - 0.1j)
        assert np.max(np.abs(prod - np.eye(60))) < 1e-10
        assert np.max(np.abs(herm_expm(H, 0.05j) - la.expm(0.05j * H))) < 1e-11

    def test_herm_expm_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            herm_expm(np.array([[0.0, 1.0], [0.0, 0.0]]), 1.0)

    def test_weyl_matrix_identity(self):
        basis = build_basis(ONE, 10)
        assert np.allclose(weyl_matrix(basis, [0.0]), np.eye(basis.dim))

    def test_weyl_vacuum_expectation(self):
        basis = build_basis(ONE, 40)
        W = weyl_matrix(basis, [0.3])
        assert abs(W[0, 0] - math.exp(-0.5 * math.pi ** 2 * 0.09)) < 1e-8
        assert weyl_truncation_error(basis, [0.3], 10) < 1e-8

    def test_weyl_product_on_low_block(self):
        basis = build_basis(ModeSpace([1.0, 2.0]), 30)
        f, g = np.array([0.1, 0.15j]), np.array([-0.05j, 0.2])
        (c, h), = (WeylPolynomial.weyl(f) * WeylPolynomial.weyl(g)).terms
        lhs = weyl_matrix(basis, f) @ weyl_matrix(basis, g)
        low = basis.block(15)
        assert np.max(np.abs((lhs - c * weyl_matrix(basis, h))[np.ix_(low, low)])) < 1e-6

    def test_exp_annihilation(self):
        basis = build_basis(ModeSpace([1.0, 2.0]), 4)
        g = np.array([0.7, -0.3j])
        E = dense(exp_annihilation(basis, g))
        assert np.allclose(E @ basis.vacuum(), basis.vacuum())
        f = np.array([0.2 + 1j, 0.5])
        one = np.zeros(basis.dim, dtype=complex)
        one[basis.index[(1, 0)]], one[basis.index[(0, 1)]] = f
        expected = one.copy()
        expected[0] += np.conj(np.vdot(f, g))
        assert np.allclose(E @ one, expected)
        assert np.allclose(np.tril(E, -1), 0) and np.allclose(np.diag(E), 1)
        a = dense(annihilation(basis, g))
        assert np.all(np.linalg.matrix_power(a, basis.N + 1) == 0)
        assert np.allclose(E, la.expm(a), atol=1e-13)

    def test_exponential_vector(self):
        basis = build_basis(ONE, 30)
        assert np.array_equal(exponential_vector(basis, [0.0]), basis.vacuum())
        e = exponential_vector(basis, [0.5])
        assert abs(np.vdot(e, e) - math.exp(0.25)) < 1e-12
        assert exponential_tail_bound(0.25, 30) < 1e-40

    def test_weyl_on_exponential_vector(self):
        basis = build_basis(ONE, 60)
        f, h = np.array([0.2 + 0.1j]), np.array([0.3 - 0.2j])
        lhs = weyl_matrix(basis, f) @ exponential_vector(basis, h)
        scal = np.exp(-0.5 * math.pi ** 2 * abs(f[0]) ** 2 + 1j * math.pi * np.vdot(f, h))
        rhs = scal * exponential_vector(basis, h + 1j * math.pi * f)
        low = basis.block(30)
        assert np.max(np.abs(lhs - rhs)[low]) < 1e-6

    def test_top_grade_mass(self):
        basis = build_basis(ONE, 3)
        v = np.array([1.0, 0.0, 0.0, 2.0])
        assert top_grade_mass(basis, v) == 2.0
        assert top_grade_mass(basis, basis.vacuum()) == 0.0


class TestOracles:
    def test_identity_expectation(self):
        basis = build_basis(ONE, 10)
        H = dgamma(basis)
        val, _ = gibbs_trace_expectation(H, 1.0, np.eye(basis.dim), basis)
        assert abs(val - 1.0) < 1e-14

    def test_bose_occupation(self):
        basis = build_basis(ONE, 40)
        val, err = gibbs_trace_expectation(dgamma(basis), 1.0, number_operator(basis), basis)
        assert abs(val - 1 / (math.e - 1)) < 1e-8
        assert abs(1 / (math.e - 1) - 0.581977) < 1e-6
        assert err < 1e-15

    @pytest.mark.parametrize("v", [0.0, 0.3, 0.3j])
    def test_gibbs_matches_closed_form(self, v):
        basis = build_basis(ONE, 40)
        src = Source(ONE, [v])
        H = build_hamiltonian(basis, src).matrix
        for f in ([0.5], [0.2j], [-0.35 + 0.35j]):
            val, err = gibbs_trace_expectation(H, 1.0, weyl_matrix(basis, f), basis)
            assert abs(val - state_fourier(QuasiFreeState.gibbs(src, 1.0), f)) < 1e-6
            assert err < 1e-10

    def test_heisenberg_trivial_cases(self):
        basis = build_basis(ModeSpace([1.0, 2.0]), 4)
        H = dgamma(basis)
        A = dense(number_operator(basis))
        out, _ = heisenberg_conjugate(H, 0.0, weyl_matrix(basis, [0.1, 0.1]))
        assert np.allclose(out, weyl_matrix(basis, [0.1, 0.1]))
        out, _ = heisenberg_conjugate(H, 1.3, A)
        assert np.allclose(out, A)

    def test_heisenberg_matches_tau(self):
        basis = build_basis(ONE, 50)
        src = Source(ONE, [0.3])
        H = build_hamiltonian(basis, src).matrix
        f = np.array([0.3])
        low = basis.block(12)
        for t in (0.5, 2.0, 5.0):
            (c, h), = tau_apply(t, WeylPolynomial.weyl(f), src).terms
            out, err = heisenberg_conjugate(H, t, weyl_matrix(basis, f), basis, 12)
            assert np.max(np.abs(out - c * weyl_matrix(basis, h))[np.ix_(low, low)]) < 1e-5
            assert err < 1e-5
