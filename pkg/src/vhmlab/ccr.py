"""Exact symbolic Weyl algebra over a finite mode set.

Elements are finite sums ``sum_j c_j W(f_j)``.  Products use the cocycle

    W(f) W(g) = W(f + g) exp(-i pi^2 Im<f, g>),

the adjoint is ``W(f)* = W(-f)``, and the van Hove dynamics acts on a
single generator by

    tau_t[W(f)] = W(exp(i t omega) f) exp(2 pi i Re<f, (exp(-i t omega) - 1) v/omega>).

States are quasi-free and given by their closed-form Fourier transform
``f -> omega(W(f))``, so every expectation here is exact up to rounding.
"""
import math

import numpy as np

from .modes import ModeMismatchError, ModeSpace, Source, inner, norm2

PI2 = math.pi ** 2


def _key(f):
    # adding 0.0 folds -0.0 into +0.0 so equal symbols share a bit pattern
    return (np.asarray(f, dtype=complex) + 0.0).tobytes()


class WeylPolynomial:
    """Finite linear combination of Weyl generators.

    Terms are kept in canonical form: a symbol occurs at most once and
    terms with an exactly zero coefficient are dropped.  Symbols are matched
    by exact bit pattern, never approximately.

    Parameters
    ----------
    M : int
        Number of modes of every symbol.
    terms : iterable of (complex, array_like)
        ``(coefficient, symbol)`` pairs; repeated symbols are merged.
    """

    __slots__ = ("M", "_terms")

    def __init__(self, M, terms=()):
        self.M = int(M)
        merged = {}
        for c, f in terms:
            f = np.array(f, dtype=complex).reshape(-1) + 0.0
            if f.size != self.M:
                raise ModeMismatchError(f"symbol has {f.size} modes, expected {self.M}")
            k = f.tobytes()
            if k in merged:
                merged[k] = (merged[k][0] + complex(c), merged[k][1])
            else:
                f.setflags(write=False)
                merged[k] = (complex(c), f)
        self._terms = {k: t for k, t in merged.items() if t[0] != 0}

    @classmethod
    def weyl(cls, f, coeff=1.0):
        """The single generator ``coeff * W(f)``."""
        f = np.asarray(f, dtype=complex).reshape(-1)
        return cls(f.size, [(coeff, f)])

    @classmethod
    def identity(cls, M):
        return cls(M, [(1.0, np.zeros(M, dtype=complex))])

    @property
    def terms(self):
        """List of ``(coefficient, symbol)`` pairs in insertion order."""
        return list(self._terms.values())

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.values())

    def coefficient(self, f):
        """Coefficient of ``W(f)`` (0 if absent)."""
        t = self._terms.get(_key(f))
        return 0j if t is None else t[0]

    def _check(self, other):
        if self.M != other.M:
            raise ModeMismatchError(f"mode counts differ: {self.M} vs {other.M}")

    def __add__(self, other):
        if not isinstance(other, WeylPolynomial):
            return NotImplemented
        self._check(other)
        return WeylPolynomial(self.M, self.terms + other.terms)

    def __sub__(self, other):
        if not isinstance(other, WeylPolynomial):
            return NotImplemented
        return self + (-1.0) * other

    def __mul__(self, other):
        if isinstance(other, WeylPolynomial):
            return weyl_mul(self, other)
        if np.isscalar(other):
            return WeylPolynomial(self.M, [(other * c, f) for c, f in self])
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return WeylPolynomial(self.M, [(other * c, f) for c, f in self])
        return NotImplemented

    def adjoint(self):
        return weyl_adjoint(self)

    def __eq__(self, other):
        if not isinstance(other, WeylPolynomial):
            return NotImplemented
        return self.M == other.M and {k: t[0] for k, t in self._terms.items()} == {
            k: t[0] for k, t in other._terms.items()
        }

    __hash__ = None

    def __repr__(self):
        body = " + ".join(f"({c:.6g})W({np.round(f, 6).tolist()})" for c, f in self)
        return f"WeylPolynomial({body or '0'})"


def symplectic_phase(f, g, sign=-1):
    """Cocycle ``exp(sign * i pi^2 Im<f, g>)`` of the Weyl product."""
    return complex(np.exp(sign * 1j * PI2 * inner(f, g).imag))


def weyl_mul(a, b, *, _cocycle_sign=-1):
    """Product of two Weyl polynomials, extended bilinearly from the generators.

    ``_cocycle_sign`` exists only so verification runs can inject a wrong
    convention as a negative control.
    """
    a._check(b)
    out = []
    for ca, fa in a:
        for cb, fb in b:
            out.append((ca * cb * symplectic_phase(fa, fb, _cocycle_sign), fa + fb))
    return WeylPolynomial(a.M, out)


def weyl_adjoint(a):
    """``(sum c W(f))* = sum conj(c) W(-f)``."""
    return WeylPolynomial(a.M, [(c.conjugate(), -f) for c, f in a])


def weyl_distance(a, b):
    """Max deviation between two polynomials whose symbols agree only approximately.

    Each term of ``a`` is paired with the nearest symbol of ``b`` (and vice
    versa); the result is the largest coefficient or symbol discrepancy.  Used
    where symbols are *computed*, e.g. ``exp(i(t+s) omega) f`` against
    ``exp(i t omega) exp(i s omega) f``.
    """
    a._check(b)
    if len(a) == 0 and len(b) == 0:
        return 0.0
    if len(a) == 0 or len(b) == 0:
        return max(abs(c) for c, _ in (a.terms or b.terms))
    fa = np.array([f for _, f in a])
    fb = np.array([f for _, f in b])
    ca = np.array([c for c, _ in a])
    cb = np.array([c for c, _ in b])
    dist = np.max(np.abs(fa[:, None, :] - fb[None, :, :]), axis=2)
    worst = 0.0
    for i, j in enumerate(np.argmin(dist, axis=1)):
        worst = max(worst, abs(ca[i] - cb[j]), dist[i, j])
    for j, i in enumerate(np.argmin(dist, axis=0)):
        worst = max(worst, abs(ca[i] - cb[j]), dist[i, j])
    return float(worst)


def tau_phase(t, f, src):
    """Scalar ``exp(2 pi i Re<f, (exp(-i t omega) - 1) v/omega>)`` picked up by ``W(f)``."""
    w = src.modes.omega
    shift = np.expm1(-1j * t * w) * src.over_omega
    return complex(np.exp(2j * math.pi * inner(f, shift).real))


def tau_apply(t, a, src):
    """Van Hove dynamics ``tau_t`` applied termwise to ``a``."""
    if a.M != src.modes.M:
        raise ModeMismatchError(f"polynomial has {a.M} modes, source has {src.modes.M}")
    rot = np.exp(1j * t * src.modes.omega)
    return WeylPolynomial(a.M, [(c * tau_phase(t, f, src), rot * f) for c, f in a])


def tau_group_check(t, s, a, src):
    """Max deviation of ``tau_{t+s}[a]`` from ``tau_t[tau_s[a]]``."""
    return weyl_distance(tau_apply(t + s, a, src), tau_apply(t, tau_apply(s, a, src), src))


def coth_half(x):
    """``coth(x/2)`` for ``x > 0``, evaluated as ``1 + 2 e^{-x} / (1 - e^{-x})``.

    Never overflows; ``x = inf`` gives exactly 1.
    """
    return 1.0 + coth_half_excess(x)


def coth_half_excess(x):
    """``coth(x/2) - 1 = 2 e^{-x} / (1 - e^{-x})`` without cancellation."""
    x = np.asarray(x, dtype=float)
    return 2.0 * np.exp(-x) / -np.expm1(-x)


class QuasiFreeState:
    """Gaussian state with Fourier transform

        f -> exp(-pi^2/2 <f, coth(beta omega/2) f>) exp(2 pi i Re<f, center>).

    ``beta = inf`` is the coherent ground state (``coth -> 1``).  Use
    :meth:`gibbs` to build the equilibrium state of a given source, whose
    center is ``-v/omega``.
    """

    def __init__(self, beta, modes, center=None):
        beta = float(beta)
        if not beta > 0:
            raise ValueError("beta must be > 0")
        self.beta = beta
        self.modes = modes
        c = modes.zero() if center is None else modes.vector(center).copy()
        if not np.all(np.isfinite(c)):
            raise ValueError("center must be finite")
        c.setflags(write=False)
        self.center = c
        self.coth = np.ones(modes.M) if math.isinf(beta) else coth_half(beta * modes.omega)

    @classmethod
    def gibbs(cls, src, beta):
        return cls(beta, src.modes, src.center)

    def __repr__(self):
        return f"QuasiFreeState(beta={self.beta}, M={self.modes.M})"


def state_fourier(st, f):
    """``omega_beta(W(f))`` in closed form."""
    f = st.modes.vector(f)
    gauss = -0.5 * PI2 * float(np.sum(st.coth * np.abs(f) ** 2))
    return complex(np.exp(gauss + 2j * math.pi * inner(f, st.center).real))


def state_eval(st, a):
    """Linear extension of :func:`state_fourier` over the terms of ``a``."""
    return sum((c * state_fourier(st, f) for c, f in a), 0j)


def qpd_gram(st, fs):
    """Matrix ``[omega_hat(f_j - f_k) exp(-i pi^2 Im<f_j, f_k>)]_{jk}``.

    Hermitian; positive semidefinite exactly when the state is positive on
    the span of ``W(f_1), ..., W(f_n)``.
    """
    fs = [st.modes.vector(f) for f in fs]
    n = len(fs)
    G = np.empty((n, n), dtype=complex)
    for j in range(n):
        for k in range(n):
            G[j, k] = state_fourier(st, fs[j] - fs[k]) * symplectic_phase(fs[j], fs[k])
    return G


def beta_limit_gap(f, src, beta):
    """``|omega_beta(W(f)) - omega_inf(W(f))|`` for finite ``beta``."""
    if math.isinf(beta):
        raise ValueError("beta must be finite")
    return abs(
        state_fourier(QuasiFreeState.gibbs(src, beta), f)
        - state_fourier(QuasiFreeState.gibbs(src, math.inf), f)
    )
