import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vhmlab.ccr import (
    PI2,
    QuasiFreeState,
    WeylPolynomial,
    beta_limit_gap,
    coth_half,
    qpd_gram,
    state_eval,
    state_fourier,
    symplectic_phase,
    tau_apply,
    tau_group_check,
    weyl_adjoint,
    weyl_distance,
    weyl_mul,
)
from vhmlab.modes import ModeMismatchError, ModeSpace, Source

W = WeylPolynomial.weyl


def cvec(rng, m, scale=1.0):
    return scale * (rng.normal(size=m) + 1j * rng.normal(size=m))


finite = st.floats(-2.0, 2.0, allow_nan=False)
vectors = st.integers(1, 3).flatmap(
    lambda m: st.tuples(*[st.lists(finite, min_size=2 * m, max_size=2 * m) for _ in range(3)])
)


def as_complex(xs):
    xs = np.asarray(xs)
    return xs[0::2] + 1j * xs[1::2]


class TestWeylPolynomial:
    def test_identity_element(self):
        f = np.array([0.3 + 0.1j, -1.0])
        assert weyl_mul(W(f), WeylPolynomial.identity(2)) == W(f)
        assert weyl_mul(WeylPolynomial.identity(2), W(f)) == W(f)

    def test_cocycle_single_mode(self):
        # Im<1, i> = 1
        prod = weyl_mul(W([1.0]), W([1j]))
        assert prod.coefficient([1 + 1j]) == pytest.approx(np.exp(-1j * PI2), abs=1e-15)
        assert len(prod) == 1

    def test_repeated_symbols_merge(self):
        a = WeylPolynomial(1, [(1.0, [0.5]), (2.0, [0.5]), (1.0, [-0.0])])
        assert len(a) == 2
        assert a.coefficient([0.5]) == 3.0
        assert a.coefficient([0.0]) == 1.0

    def test_zero_coefficients_dropped(self):
        a = W([1.0]) - W([1.0])
        assert len(a) == 0

    def test_mode_mismatch(self):
        with pytest.raises(ModeMismatchError):
            W([1.0]) * W([1.0, 2.0])
        with pytest.raises(ModeMismatchError):
            WeylPolynomial(2, [(1.0, [1.0])])

    def test_adjoint_of_identity(self):
        assert weyl_adjoint(WeylPolynomial.identity(3)) == WeylPolynomial.identity(3)

    def test_adjoint_is_involution_exactly(self):
        a = W([0.2 - 0.7j, 1.5], 0.3 + 2j)
        assert weyl_adjoint(weyl_adjoint(a)) == a

    def test_scalar_multiplication(self):
        a = 2.0 * W([1.0]) * 0.5
        assert a == W([1.0])

    def test_random_associativity_and_adjoint(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            f, g, h = (cvec(rng, 2) for _ in range(3))
            lhs = (W(f) * W(g)) * W(h)
            rhs = W(f) * (W(g) * W(h))
            assert weyl_distance(lhs, rhs) < 1e-12
            a = WeylPolynomial(2, [(1j, f), (0.5, g)])
            b = WeylPolynomial(2, [(2.0, h), (-1.0, f + g)])
            assert weyl_distance((a * b).adjoint(), b.adjoint() * a.adjoint()) < 1e-12

    @settings(max_examples=60, deadline=None)
    @given(vectors)
    def test_commutation_phase(self, fgh):
        f, g, _ = (as_complex(x) for x in fgh)
        (c1, s1), = weyl_mul(W(f), W(g)).terms
        (c2, s2), = weyl_mul(W(g), W(f)).terms
        assert np.allclose(s1, s2, atol=1e-15)
        # W(f)W(g) = W(g)W(f) exp(-2 i pi^2 Im<f, g>)
        assert abs(c1 / c2 - np.exp(-2j * PI2 * np.vdot(f, g).imag)) < 1e-12

    @settings(max_examples=60, deadline=None)
    @given(vectors)
    def test_inverse(self, fgh):
        f = as_complex(fgh[0])
        assert weyl_distance(W(f) * weyl_adjoint(W(f)), WeylPolynomial.identity(f.size)) < 1e-15

    def test_symplectic_phase_sign(self):
        assert symplectic_phase([1.0], [1j]) == pytest.approx(np.exp(-1j * PI2))
        assert symplectic_phase([1.0], [1j], sign=+1) == pytest.approx(np.exp(1j * PI2))


class TestDynamics:
    def test_time_zero(self):
        src = Source(ModeSpace([1.0, 2.0]), [0.3, 1j])
        a = WeylPolynomial(2, [(1.0, [0.1, 0.2]), (2j, [1.0, -1j])])
        assert weyl_distance(tau_apply(0.0, a, src), a) == 0.0

    def test_free_evolution(self):
        modes = ModeSpace([1.0, 3.0])
        f = np.array([0.5, 1j])
        (c, h), = tau_apply(0.7, W(f), Source(modes)).terms
        assert c == 1.0
        assert np.allclose(h, np.exp(0.7j * modes.omega) * f)

    def test_half_period_value(self):
        # M=1, omega=1, v=1, f=1, t=pi: phase exp(2 pi i Re(-2)) = 1, symbol -1
        src = Source(ModeSpace([1.0]), [1.0])
        (c, h), = tau_apply(math.pi, W([1.0]), src).terms
        assert abs(c - 1.0) < 1e-12
        assert abs(h[0] + 1.0) < 1e-15

    def test_group_law_trivial(self):
        src = Source(ModeSpace([1.0]), [0.3])
        assert tau_group_check(0.0, 0.0, W([1.0]), src) == 0.0

    def test_group_law_and_automorphism(self):
        rng = np.random.default_rng(2)
        for _ in range(30):
            M = int(rng.integers(1, 4))
            src = Source(ModeSpace(rng.uniform(1, 3, M), 1.0), cvec(rng, M))
            t, s = rng.uniform(-10, 10, 2)
            a = WeylPolynomial(M, [(1.0, cvec(rng, M)), (1j, cvec(rng, M))])
            b = W(cvec(rng, M))
            assert tau_group_check(t, s, a, src) < 1e-12
            lhs = tau_apply(t, a * b, src)
            rhs = tau_apply(t, a, src) * tau_apply(t, b, src)
            assert weyl_distance(lhs, rhs) < 1e-12

    def test_source_mode_mismatch(self):
        with pytest.raises(ModeMismatchError):
            tau_apply(1.0, W([1.0, 2.0]), Source(ModeSpace([1.0]), [0.1]))


class TestStates:
    def test_normalisation(self):
        st_ = QuasiFreeState.gibbs(Source(ModeSpace([1.0, 2.0]), [0.4, 1j]), 1.0)
        assert state_fourier(st_, [0.0, 0.0]) == 1.0
        assert state_eval(st_, WeylPolynomial.identity(2)) == 1.0

    def test_thermal_value(self):
        # M=1, omega=1, beta=1, v=0, f=1: exp(-pi^2/2 coth(1/2))
        st_ = QuasiFreeState(1.0, ModeSpace([1.0]))
        val = state_fourier(st_, [1.0])
        expected = math.exp(-0.5 * PI2 / math.tanh(0.5))
        assert val == pytest.approx(expected, rel=1e-13)
        assert val.real == pytest.approx(2.30e-5, rel=5e-3)

    def test_ground_value(self):
        # M=1, omega=1, v=1, beta=inf, f=1: phase exp(-2 pi i) = 1
        st_ = QuasiFreeState.gibbs(Source(ModeSpace([1.0]), [1.0]), math.inf)
        val = state_fourier(st_, [1.0])
        assert abs(val - math.exp(-0.5 * PI2)) < 1e-15
        assert abs(val) == pytest.approx(7.19e-3, rel=1e-3)

    def test_coth_half_limits(self):
        assert coth_half(np.inf) == 1.0
        x = np.array([0.1, 1.0, 10.0, 40.0])
        assert np.allclose(coth_half(x), 1 / np.tanh(x / 2), rtol=1e-14)
        assert np.all(np.isfinite(coth_half(np.array([800.0]))))

    def test_positivity_on_hermitian_squares(self):
        rng = np.random.default_rng(3)
        src = Source(ModeSpace([1.0, 1.7]), cvec(rng, 2))
        for beta in (0.5, 2.0, math.inf):
            st_ = QuasiFreeState.gibbs(src, beta)
            for _ in range(20):
                a0 = WeylPolynomial(2, [(complex(*rng.normal(size=2)), cvec(rng, 2, 0.5)) for _ in range(4)])
                val = state_eval(st_, weyl_adjoint(a0) * a0)
                assert abs(val.imag) < 1e-12
                assert val.real >= -1e-12

    def test_stationarity(self):
        rng = np.random.default_rng(4)
        src = Source(ModeSpace([1.0, 2.5]), cvec(rng, 2))
        for beta in (1.0, math.inf):
            st_ = QuasiFreeState.gibbs(src, beta)
            f = cvec(rng, 2, 0.5)
            for t in np.linspace(-4, 4, 9):
                moved = state_eval(st_, tau_apply(t, W(f), src))
                assert abs(moved - state_fourier(st_, f)) < 1e-13

    def test_two_point_matches_product_formula(self):
        # omega_beta(W(f) tau_t W(g)) from the product rule vs the written-out Gaussian
        rng = np.random.default_rng(5)
        modes = ModeSpace([1.0, math.sqrt(2)])
        src = Source(modes, cvec(rng, 2))
        beta = 1.3
        st_ = QuasiFreeState.gibbs(src, beta)
        c = 1 / np.tanh(beta * modes.omega / 2)
        f, g = cvec(rng, 2, 0.4), cvec(rng, 2, 0.4)
        for t in (0.0, 0.4, 2.0):
            gt = np.exp(1j * t * modes.omega) * g
            lhs = state_eval(st_, W(f) * tau_apply(t, W(g), src))
            quad = np.sum(c * np.abs(f + gt) ** 2)
            lin = np.vdot(f + gt, src.center).real + np.vdot(g, np.expm1(-1j * t * modes.omega) * src.over_omega).real
            rhs = np.exp(-0.5 * PI2 * quad + 2j * math.pi * lin - 1j * PI2 * np.vdot(f, gt).imag)
            assert abs(lhs - rhs) < 1e-12


class TestQpd:
    def test_single_vector(self):
        st_ = QuasiFreeState(1.0, ModeSpace([1.0]))
        assert np.array_equal(qpd_gram(st_, [[0.7]]), [[1.0]])

    @pytest.mark.parametrize("beta", [1.0, math.inf])
    def test_positive_semidefinite(self, beta):
        rng = np.random.default_rng(6)
        src = Source(ModeSpace([1.0, 2.0]), cvec(rng, 2, 3.0))
        G = qpd_gram(QuasiFreeState.gibbs(src, beta), [cvec(rng, 2) for _ in range(8)])
        assert np.allclose(G, G.conj().T, atol=1e-15)
        assert np.linalg.eigvalsh(G).min() >= -1e-10

    def test_wrong_cocycle_breaks_positivity(self):
        # a matrix built with the opposite cocycle sign is not a valid Gram matrix
        # for the pure ground state once the symbols are far apart
        modes = ModeSpace([1.0])
        st_ = QuasiFreeState(math.inf, modes)
        fs = [np.array([0.0]), np.array([0.5]), np.array([0.5j])]
        n = len(fs)
        G = np.array([[state_fourier(st_, fs[j] - fs[k]) * symplectic_phase(fs[j], fs[k], +1)
                       for k in range(n)] for j in range(n)])
        good = qpd_gram(st_, fs)
        assert np.linalg.eigvalsh(good).min() >= -1e-12
        assert not np.allclose(G, good)


class TestBetaLimit:
    def test_zero_vector(self):
        src = Source(ModeSpace([1.0]), [0.5])
        for beta in (0.5, 1.0, 10.0):
            assert beta_limit_gap([0.0], src, beta) == 0.0

    def test_monotone(self):
        src = Source(ModeSpace([1.0]), [0.0])
        gaps = [beta_limit_gap([1.0], src, b) for b in (1.0, 5.0, 10.0)]
        assert gaps[2] < gaps[1] < gaps[0]

    def test_exponential_rate(self):
        src = Source(ModeSpace([1.0, 2.0], 1.0), [0.3, 0.1])
        f = np.array([0.4, 0.2j])
        scaled = [beta_limit_gap(f, src, b) * math.exp(b * 1.0) for b in range(1, 21)]
        assert max(scaled) < 10 * min(scaled)

    def test_rejects_infinite_beta(self):
        with pytest.raises(ValueError):
            beta_limit_gap([1.0], Source(ModeSpace([1.0])), math.inf)
