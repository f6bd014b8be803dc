"""The van Hove Hamiltonian, its exact solution, and cutoff families.

``H = dGamma(omega) + a(v) + a*(v)`` is diagonalised exactly by the coherent
shift ``a_k -> a_k - v_k/omega_k``: its ground energy is
``-sum |v_k|^2/omega_k`` and its ground state is the coherent vector centred
at ``-v/omega``.  Cutoff families push ``v`` toward a distribution by
switching on more and more modes of a one-dimensional ladder.
"""
import csv
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .fock import MAX_DENSE_DIM, DimensionError, annihilation, dgamma, exponential_vector
from .modes import ModeSpace, Source, norm2

FLOW_HEADER = (
    "lambda",
    "norm_v",
    "norm_v_sqrtw",
    "norm_v_w",
    "self_energy",
    "ground_energy",
    "vacuum_overlap",
    "dressed_gap",
)


@dataclass(frozen=True, eq=False)
class VhmHamiltonian:
    basis: object
    source: Source
    matrix: object

    def toarray(self):
        return self.matrix.toarray()


def build_hamiltonian(basis, src, max_dim=MAX_DENSE_DIM):
    """Assemble ``dGamma(omega) + a(v) + a*(v)`` on ``basis`` as a sparse matrix."""
    if basis.modes != src.modes:
        raise ValueError("basis and source live over different mode sets")
    if basis.dim > max_dim:
        raise DimensionError(f"Hamiltonian dimension {basis.dim} exceeds the cap {max_dim}")
    a = annihilation(basis, src.v)
    H = dgamma(basis) + a + a.conj().T
    return VhmHamiltonian(basis, src, H.tocsr())


def self_energy(src):
    """``||omega^{-1/2} v||^2 = sum_k |v_k|^2 / omega_k``."""
    return float(np.sum(np.abs(src.v) ** 2 / src.modes.omega))


def exact_ground_energy(src):
    """Bottom of the spectrum, ``-self_energy``."""
    return -self_energy(src)


def vacuum_overlap(src):
    """``|<Omega, ground state>| = exp(-||v/omega||^2 / 2)``."""
    return math.exp(-0.5 * norm2(src.over_omega))


def coherent_ground_state(basis, src):
    """Normalised truncation of the coherent vector centred at ``-v/omega``."""
    psi = exponential_vector(basis, src.center)
    return psi / np.linalg.norm(psi)


PROFILES = ("mild", "critical", "severe")


@dataclass(frozen=True)
class CutoffFamily:
    """Sources on the ladder ``omega_k = sqrt(mu^2 + k^2)``, ``k = 1..Lambda``.

    ``mild``: ``v_k = 1/omega_k``, every norm converges.
    ``critical``: ``v_k = 1``; ``||v||^2`` and ``||v/sqrt(omega)||^2`` diverge,
    ``||v/omega||^2`` converges.
    ``severe``: ``v_k = sqrt(omega_k)``; ``||v/omega||^2 ~ log Lambda`` diverges,
    so the vacuum overlap goes to zero.
    """

    profile: str
    mu: float = 1.0

    def __post_init__(self):
        if self.profile not in PROFILES:
            raise ValueError(f"unknown profile {self.profile!r}; expected one of {PROFILES}")
        if not self.mu > 0:
            raise ValueError("mu must be > 0")

    def frequencies(self, lam):
        k = np.arange(1, int(lam) + 1, dtype=float)
        return np.sqrt(self.mu ** 2 + k ** 2)

    def coefficients(self, omega):
        if self.profile == "mild":
            return 1.0 / omega
        if self.profile == "critical":
            return np.ones_like(omega)
        return np.sqrt(omega)

    def modes(self, lam):
        return ModeSpace(self.frequencies(lam), self.mu)

    def source(self, lam):
        modes = self.modes(lam)
        return Source(modes, self.coefficients(modes.omega))


class FlowRow(NamedTuple):
    lam: int
    norm_v: float
    norm_v_sqrtw: float
    norm_v_w: float
    self_energy: float
    ground_energy: float
    vacuum_overlap: float
    dressed_gap: float


def flow_table(family, lambdas):
    """Renormalisation-flow table, one :class:`FlowRow` per cutoff.

    Norm columns hold *squared* norms.  ``dressed_gap`` is the spectral gap of
    ``dGamma(omega)`` above its ground value, ``min_k omega_k``; it does not
    depend on the cutoff.
    """
    lambdas = [int(x) for x in lambdas]
    if not lambdas:
        return []
    if any(b <= a for a, b in zip(lambdas, lambdas[1:])) or lambdas[0] < 1:
        raise ValueError("lambdas must be positive and strictly increasing")
    w = family.frequencies(lambdas[-1])
    v = family.coefficients(w)
    a2 = np.abs(v) ** 2
    s_v = np.cumsum(a2)
    s_sqrt = np.cumsum(a2 / w)
    s_w = np.cumsum(a2 / w ** 2)
    gap = float(w[0])
    rows = []
    for lam in lambdas:
        i = lam - 1
        se = float(s_sqrt[i])
        rows.append(
            FlowRow(lam, float(s_v[i]), se, float(s_w[i]), se, -se, math.exp(-0.5 * float(s_w[i])), gap)
        )
    return rows


def write_flow_csv(rows, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(FLOW_HEADER)
        for row in rows:
            writer.writerow([row.lam] + [repr(float(x)) for x in row[1:]])


def overlap_threshold(family, level=0.01, max_lambda=10 ** 7):
    """Smallest cutoff whose vacuum overlap drops below ``level``.

    Partial sums of ``||v/omega||^2`` are scanned in growing blocks.  Returns
    ``None`` if the sums converge below that bound within ``max_lambda``.
    """
    total, start, block = 0.0, 1, 4096
    while start <= max_lambda:
        stop = min(start + block, max_lambda + 1)
        k = np.arange(start, stop, dtype=float)
        w = np.sqrt(family.mu ** 2 + k ** 2)
        partial = total + np.cumsum(np.abs(family.coefficients(w)) ** 2 / w ** 2)
        hit = np.flatnonzero(np.exp(-0.5 * partial) < level)
        if hit.size:
            return int(start + hit[0])
        total = float(partial[-1])
        start = stop
        block *= 2
    return None
