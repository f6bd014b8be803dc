"""KMS, ground-state and zero-temperature checks on closed-form two-point functions.

For generators ``a = W(f)``, ``b = W(g)`` the functions

    A(z) = omega_beta(W(f) tau_z[W(g)]),   B(z) = omega_beta(tau_z[W(g)] W(f))

are finite sums of exponentials ``exp(+-i z omega_k)`` in the exponent, hence
entire.  They are evaluated by substituting complex ``z`` straight into the
closed form, never by continuing sampled data.  With
``tau_t(b) = exp(itH) b exp(-itH)`` the KMS boundary condition reads
``A(t + i beta) = B(t)``; integrated against ``F`` it becomes
``int F(t - i beta) A(t) dt = int F(t) B(t) dt``.
"""
import json
import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import integrate
from scipy.special import erfc

from .ccr import PI2, QuasiFreeState, coth_half_excess, state_fourier

# Hann-window leakage is measured outside this many bins around zero frequency
GUARD_BINS = 3


@dataclass
class VerificationRecord:
    check: str
    parameters: dict
    residual: float
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.residual = float(self.residual)
        self.passed = bool(self.residual < self.tolerance)

    def to_dict(self):
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), sort_keys=True, **kw)


def _pair(x, weight, y):
    # <x, weight y> for a z-dependent diagonal weight; conj only on x
    return np.sum(np.conj(x)[None, :] * weight * y[None, :], axis=-1)


class TwoPointFunction:
    """``A(z)`` and ``B(z)`` for one pair of Weyl generators in ``omega_beta``.

    Parameters
    ----------
    beta : float
        Inverse temperature, ``inf`` allowed.
    f, g : array_like
        Symbols of ``a = W(f)`` and ``b = W(g)``.
    src : Source
        Van Hove source; fixes the frequencies and the shift ``-v/omega``.
    """

    def __init__(self, beta, f, g, src):
        self.beta = float(beta)
        self.src = src
        self.f = src.modes.vector(f)
        self.g = src.modes.vector(g)
        self.state = QuasiFreeState.gibbs(src, self.beta)
        f, g = self.f, self.g
        self._diag = -0.5 * PI2 * float(np.sum(self.state.coth * (np.abs(f) ** 2 + np.abs(g) ** 2)))
        shift = src.center
        self._phase = 2j * math.pi * (np.vdot(f, shift) + np.vdot(g, shift)).real
        # coth - 1 and coth + 1, formed without cancellation
        w = src.modes.omega
        self._minus = np.zeros(src.modes.M) if math.isinf(self.beta) else coth_half_excess(self.beta * w)
        self._plus = 2.0 + self._minus

    def _terms(self, z):
        # <f, e^{i z omega} g> and <g, e^{-i z omega} f>; the exponents of A and B
        # are fixed combinations of these with weights coth +- 1, grouped so the
        # e^{beta omega} growth at z = t + i beta never has to cancel
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        w = self.src.modes.omega
        fwd = np.exp(1j * z[:, None] * w[None, :])
        bwd = np.exp(-1j * z[:, None] * w[None, :])
        return fwd, bwd

    def A(self, z):
        """``omega_beta(W(f) tau_z[W(g)])``."""
        fwd, bwd = self._terms(z)
        f, g = self.f, self.g
        x = _pair(f, self._plus * fwd, g) + _pair(g, self._minus * bwd, f)
        return np.exp(self._phase + self._diag - 0.5 * PI2 * x)

    def B(self, z):
        """``omega_beta(tau_z[W(g)] W(f))``."""
        fwd, bwd = self._terms(z)
        f, g = self.f, self.g
        x = _pair(f, self._minus * fwd, g) + _pair(g, self._plus * bwd, f)
        return np.exp(self._phase + self._diag - 0.5 * PI2 * x)


def coth_identity_residual(xs):
    """Max deviation of ``(coth(x/2) +- 1) exp(-+x) = -+1 + coth(x/2)`` over ``xs``.

    ``coth(x/2) - 1`` is taken from :func:`coth_half_excess`; forming it as a
    difference loses every digit once ``exp(-x)`` drops below machine epsilon.
    Valid for ``0 < x < 700``, where ``exp(x)`` is still finite.
    """
    x = np.asarray(xs, dtype=float)
    excess = coth_half_excess(x)
    upper = np.abs((2.0 + excess) * np.exp(-x) - excess)
    lower = np.abs(excess * np.exp(x) - (2.0 + excess))
    return float(max(upper.max(), lower.max()))


def kms_pointwise_residual(tpf, ts):
    """``max_t |A(t + i beta) - B(t)|`` over the grid ``ts`` (finite ``beta``)."""
    if math.isinf(tpf.beta):
        raise ValueError("beta must be finite")
    ts = np.asarray(ts, dtype=float)
    return float(np.max(np.abs(tpf.A(ts + 1j * tpf.beta) - tpf.B(ts))))


def _hann_leakage_bound(samples, guard=GUARD_BINS, probes=64):
    # worst fraction of a single nonnegative-frequency tone's windowed spectrum
    # that lands below -guard bins, over tone offsets in [0, 1) bins
    n = np.arange(samples)
    win = np.hanning(samples + 1)[:-1]
    worst = 0.0
    for nu in np.linspace(0.0, 1.0, probes, endpoint=False):
        spec = np.abs(np.fft.fft(win * np.exp(2j * math.pi * nu * n / samples)))
        freqs = np.fft.fftfreq(samples, 1.0 / samples)
        worst = max(worst, spec[freqs < -guard].sum() / spec.sum())
    return float(worst)


class SpectralSupport(NamedTuple):
    negative_mass: float
    bound: float
    commensurate: bool


def ground_spectral_support(f, g, src, samples=256, beta=math.inf, period=None):
    """Negative-frequency fraction of the spectrum of ``t -> A(t)``.

    If every frequency is an integer multiple of ``min(omega)`` the function is
    periodic with period ``2 pi / min(omega)`` and one period is sampled
    exactly; the returned ``bound`` is then 1e-10.  Otherwise a Hann window
    over ``period`` (default ``16 pi / min(omega)``) is used, frequencies within
    ``GUARD_BINS`` bins of zero are ignored, and ``bound`` is the window's
    worst single-tone leakage.  Returns ``(negative_mass, bound, commensurate)``.
    """
    w = src.modes.omega
    base = float(w.min())
    ratio = w / base
    commensurate = bool(np.allclose(ratio, np.round(ratio), rtol=0, atol=1e-12))
    tpf = TwoPointFunction(beta, f, g, src)
    if commensurate and period is None:
        ts = 2 * math.pi / base * np.arange(samples) / samples
        spec = np.abs(np.fft.fft(tpf.A(ts)))
        k = np.fft.fftfreq(samples, 1.0 / samples)
        neg = spec[k < 0].sum()
        bound = 1e-10
    else:
        T = 16 * math.pi / base if period is None else float(period)
        ts = T * np.arange(samples) / samples
        win = np.hanning(samples + 1)[:-1]
        spec = np.abs(np.fft.fft(win * tpf.A(ts)))
        k = np.fft.fftfreq(samples, 1.0 / samples)
        neg = spec[k < -GUARD_BINS].sum()
        bound = _hann_leakage_bound(samples)
        commensurate = False
    total = spec.sum()
    return SpectralSupport(float(neg / total) if total else 0.0, bound, commensurate)


def weakstar_convergence_sweep(f, src, betas):
    """``|omega_beta(W(f)) - omega_inf(W(f))|`` for each ``beta`` in ``betas``."""
    betas = [float(b) for b in betas]
    if any(b2 <= b1 for b1, b2 in zip(betas, betas[1:])):
        raise ValueError("betas must be increasing")
    ground = state_fourier(QuasiFreeState.gibbs(src, math.inf), f)
    return np.array([abs(state_fourier(QuasiFreeState.gibbs(src, b), f) - ground) for b in betas])


class QuadratureError(RuntimeError):
    pass


class KMSIntegral(NamedTuple):
    residual: float
    lhs: complex
    rhs: complex
    contour_residual: float
    tail_bound: float
    quad_error: float


def _complex_quad(fn, a, b, tol):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            re, e1 = integrate.quad(lambda t: complex(fn(t)).real, a, b, epsabs=tol, epsrel=0.0, limit=1000)
            im, e2 = integrate.quad(lambda t: complex(fn(t)).imag, a, b, epsabs=tol, epsrel=0.0, limit=1000)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"quadrature did not reach {tol:.1e}: {exc}") from exc
    return complex(re, im), e1 + e2


def kms_integral_residual(tpf, center=0.0, width=1.0, quad_tol=1e-12):
    """Both sides of the integrated KMS condition for a Gaussian test function.

    ``F(t) = exp(-(t - center)^2 / (2 width^2))`` is entire and decays fast,
    so the real line can be cut at ``center +- L`` with the reported tail
    bound.  Also returns the contour-shift residual
    ``|int F(t - i beta) A(t) dt - int F(t) A(t + i beta) dt|``.

    Raises
    ------
    QuadratureError
        If scipy flags the integral as unconverged or the combined error
        estimate exceeds ``30 * quad_tol``.
    """
    beta = tpf.beta
    if math.isinf(beta):
        raise ValueError("beta must be finite")
    s2 = 2.0 * width ** 2
    growth = math.exp(beta ** 2 / s2)
    # |F(t - i beta) A(t)| <= growth * exp(-(t - c)^2 / s2) since |A(t)| <= 1
    L = width * math.sqrt(2.0 * (beta ** 2 / s2 + 36.0 * math.log(10.0)))
    tail = growth * width * math.sqrt(2 * math.pi) * erfc(L / (math.sqrt(2.0) * width))

    def F(z):
        return np.exp(-((z - center) ** 2) / s2)

    a, b = center - L, center + L
    lhs, e1 = _complex_quad(lambda t: F(t - 1j * beta) * tpf.A(t)[0], a, b, quad_tol)
    rhs, e2 = _complex_quad(lambda t: F(t) * tpf.B(t)[0], a, b, quad_tol)
    shifted, e3 = _complex_quad(lambda t: F(t) * tpf.A(t + 1j * beta)[0], a, b, quad_tol)
    qerr = e1 + e2 + e3
    if qerr > 30 * quad_tol:
        raise QuadratureError(f"quadrature error estimate {qerr:.3e} above requested {quad_tol:.1e}")
    return KMSIntegral(abs(lhs - rhs), lhs, rhs, abs(lhs - shifted), tail, qerr)
