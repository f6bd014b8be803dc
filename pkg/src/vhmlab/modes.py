"""Finite mode sets, test-function vectors and sources.

Every object in the package lives over a finite set of ``M`` bosonic modes
with strictly positive frequencies.  Test functions and sources are plain
complex numpy vectors of length ``M``; the inner product is conjugate-linear
in its *first* argument throughout.
"""
from dataclasses import dataclass, field

import numpy as np


class ModeMismatchError(ValueError):
    """Raised when two mode vectors (or a vector and a mode set) disagree in length."""


def inner(f, g):
    """``<f, g> = sum_k conj(f_k) g_k``."""
    return complex(np.vdot(f, g))


def norm2(f):
    """Squared Euclidean norm ``<f, f>`` as a float."""
    f = np.asarray(f)
    return float(np.sum(np.abs(f) ** 2))


@dataclass(frozen=True)
class ModeSpace:
    """Mode frequencies ``omega`` with mass gap ``mu``.

    Parameters
    ----------
    omega : array_like
        One real frequency per mode.
    mu : float, optional
        Lower bound of the dispersion; defaults to ``min(omega)``.
    """

    omega: np.ndarray
    mu: float = None

    def __post_init__(self):
        omega = np.array(self.omega, dtype=float).reshape(-1)
        if omega.size == 0:
            raise ValueError("at least one mode is required")
        if not np.all(np.isfinite(omega)):
            raise ValueError("frequencies must be finite")
        mu = float(omega.min()) if self.mu is None else float(self.mu)
        if not mu > 0:
            raise ValueError("mu must be > 0")
        if np.any(omega < mu):
            raise ValueError("every frequency must satisfy omega >= mu")
        omega.setflags(write=False)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "mu", mu)

    @property
    def M(self):
        return self.omega.size

    def vector(self, f):
        """Validate ``f`` as a complex vector over these modes."""
        f = np.asarray(f, dtype=complex).reshape(-1)
        if f.size != self.M:
            raise ModeMismatchError(f"expected {self.M} mode amplitudes, got {f.size}")
        return f

    def zero(self):
        return np.zeros(self.M, dtype=complex)

    def __eq__(self, other):
        if not isinstance(other, ModeSpace):
            return NotImplemented
        return self.mu == other.mu and np.array_equal(self.omega, other.omega)

    def __hash__(self):
        return hash((self.mu, self.omega.tobytes()))


@dataclass(frozen=True)
class Source:
    """Source coefficients ``v`` of the van Hove field over ``modes``."""

    modes: ModeSpace
    v: np.ndarray = field(default=None)

    def __post_init__(self):
        v = self.modes.zero() if self.v is None else self.modes.vector(self.v).copy()
        if not np.all(np.isfinite(v)):
            raise ValueError("source coefficients must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "v", v)

    @property
    def over_omega(self):
        """``v / omega``; the coherent ground state sits at minus this vector."""
        return self.v / self.modes.omega

    @property
    def over_sqrt_omega(self):
        return self.v / np.sqrt(self.modes.omega)

    @property
    def center(self):
        """Shift center ``-v/omega`` of the ground state."""
        return -self.over_omega
