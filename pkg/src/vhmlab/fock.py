"""Truncated bosonic Fock space with a total-particle cutoff.

The basis holds every occupation tuple ``(n_1, ..., n_M)`` with
``sum n_k <= N``, graded by total particle number and ordered
lexicographically inside each grade.  Ladder operators are stored as
``scipy.sparse`` CSR matrices; anything that needs an eigendecomposition is
densified, subject to :data:`MAX_DENSE_DIM`.

Truncation is exact for operators that do not raise particle number
(``a(f)``, ``dGamma``, ``exp(a(g))``).  Everything built from creation
operators is only approximate near the top grade, so the routines that
depend on it also return an a-posteriori estimate: the weight that ends up
in the highest grades.
"""
import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
from scipy.special import comb, gammaln

from .modes import ModeSpace

MAX_BASIS_DIM = 200_000
MAX_DENSE_DIM = 2_000


class DimensionError(ValueError):
    """Truncated space too large for the requested representation."""


class Truncated(NamedTuple):
    """A truncation-limited result with its a-posteriori error estimate."""

    value: object
    truncation_error: float


def _compositions(total, parts):
    # all tuples of `parts` nonnegative ints summing to `total`, lexicographic
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True, eq=False)
class FockBasis:
    """Occupation-number basis over ``modes`` with total cutoff ``N``."""

    modes: ModeSpace
    N: int
    occupations: np.ndarray
    index: dict

    @property
    def M(self):
        return self.modes.M

    @property
    def dim(self):
        return self.occupations.shape[0]

    @property
    def states(self):
        return [tuple(int(n) for n in row) for row in self.occupations]

    @cached_property
    def grades(self):
        """Total particle number of every basis state."""
        return self.occupations.sum(axis=1)

    def block(self, max_grade):
        """Indices of basis states with at most ``max_grade`` particles."""
        return np.flatnonzero(self.grades <= max_grade)

    @cached_property
    def _lowering(self):
        ops = []
        for k in range(self.M):
            rows, cols, vals = [], [], []
            for j, occ in enumerate(self.occupations):
                n = occ[k]
                if n:
                    lowered = occ.copy()
                    lowered[k] -= 1
                    rows.append(self.index[tuple(lowered.tolist())])
                    cols.append(j)
                    vals.append(math.sqrt(n))
            ops.append(sp.csr_matrix((vals, (rows, cols)), shape=(self.dim, self.dim), dtype=complex))
        return ops

    def mode_annihilator(self, k):
        """Sparse ``a_k``: ``a_k |.., n_k, ..> = sqrt(n_k) |.., n_k - 1, ..>``."""
        return self._lowering[k]

    def vacuum(self):
        e = np.zeros(self.dim, dtype=complex)
        e[0] = 1.0
        return e

    def __repr__(self):
        return f"FockBasis(M={self.M}, N={self.N}, dim={self.dim})"


def fock_dimension(M, N):
    """``C(M + N, N)``."""
    return int(comb(M + N, N, exact=True))


def build_basis(modes, N, max_dim=MAX_BASIS_DIM):
    """Enumerate the cutoff-``N`` occupation basis over ``modes``."""
    N = int(N)
    if N < 0:
        raise ValueError("N must be >= 0")
    dim = fock_dimension(modes.M, N)
    if dim > max_dim:
        raise DimensionError(f"basis dimension {dim} exceeds the maximum {max_dim}")
    states = [c for n in range(N + 1) for c in _compositions(n, modes.M)]
    occ = np.array(states, dtype=np.int64).reshape(dim, modes.M)
    occ.setflags(write=False)
    return FockBasis(modes, N, occ, {s: i for i, s in enumerate(states)})


def dense(op):
    """Dense complex copy of a sparse or dense operator, capped at MAX_DENSE_DIM."""
    n = op.shape[0]
    if n > MAX_DENSE_DIM:
        raise DimensionError(f"refusing to densify a {n}x{n} operator (cap {MAX_DENSE_DIM})")
    return op.toarray().astype(complex) if sp.issparse(op) else np.asarray(op, dtype=complex)


def annihilation(basis, f):
    """``a(f) = sum_k conj(f_k) a_k`` (antilinear in ``f``)."""
    f = basis.modes.vector(f)
    op = sp.csr_matrix((basis.dim, basis.dim), dtype=complex)
    for k in range(basis.M):
        if f[k] != 0:
            op = op + np.conj(f[k]) * basis.mode_annihilator(k)
    return op


def creation(basis, f):
    """``a*(f)``, the conjugate transpose of :func:`annihilation`."""
    return annihilation(basis, f).conj().T.tocsr()


def field(basis, f):
    """Hermitian field ``a(f) + a*(f)``."""
    a = annihilation(basis, f)
    return (a + a.conj().T).tocsr()


def number_operator(basis):
    return sp.diags(basis.grades.astype(complex)).tocsr()


def dgamma(basis, omega=None):
    """Second quantization of the one-particle frequencies: diagonal ``sum_k n_k omega_k``."""
    omega = basis.modes.omega if omega is None else np.asarray(omega, dtype=float)
    return sp.diags((basis.occupations @ omega).astype(complex)).tocsr()


def top_grade_mass(basis, vec, grades=1):
    """Norm of the component of ``vec`` in the top ``grades`` particle sectors."""
    vec = np.asarray(vec)
    mask = basis.grades > basis.N - grades
    return float(np.linalg.norm(vec[mask], axis=0).max()) if vec.ndim == 2 else float(np.linalg.norm(vec[mask]))


def _check_hermitian(H, tol=1e-12):
    scale = max(1.0, float(np.max(np.abs(H)))) if H.size else 1.0
    dev = float(np.max(np.abs(H - H.conj().T))) if H.size else 0.0
    if dev > tol * scale:
        raise ValueError(f"operator is not Hermitian (deviation {dev:.3e})")


def herm_expm(H, s):
    """``exp(s H)`` for Hermitian ``H`` via its eigendecomposition.

    Parameters
    ----------
    H : (n, n) array or sparse matrix
        Must be Hermitian to 1e-12 (relative to its largest entry).
    s : complex
        Scalar multiplying ``H`` in the exponent; purely imaginary ``s`` gives
        a unitary.
    """
    H = dense(H)
    _check_hermitian(H)
    lam, V = la.eigh(H)
    return (V * np.exp(s * lam)) @ V.conj().T


def weyl_matrix(basis, f):
    """Fock representation ``pi_0(W(f)) = exp(i pi (a(f) + a*(f)))`` on the truncation.

    Unitary by construction; agrees with the untruncated operator only on
    vectors far below the cutoff (see :func:`weyl_truncation_error`).
    """
    return herm_expm(field(basis, f), 1j * math.pi)


def weyl_truncation_error(basis, f, max_grade):
    """Largest top-grade weight of ``pi_0(W(f)) e_j`` over basis states with ``<= max_grade`` particles."""
    cols = weyl_matrix(basis, f)[:, basis.block(max_grade)]
    return top_grade_mass(basis, cols)


def _nilpotent_exp(op, order):
    # sum_{m <= order} op^m / m!, exact for an operator nilpotent of that order
    n = op.shape[0]
    total = sp.identity(n, dtype=complex, format="csr")
    term = sp.identity(n, dtype=complex, format="csr")
    for m in range(1, order + 1):
        term = (term @ op) / m
        if term.nnz == 0:
            break
        total = total + term
    return total.tocsr()


def exp_annihilation(basis, g):
    """``exp(a(g))`` as the finite series ``sum_{m <= N} a(g)^m / m!``.

    Exact on the truncation: ``a(g)`` lowers the particle number so the cutoff
    space is invariant and ``a(g)^(N+1) = 0``.  Upper triangular with unit
    diagonal in the graded basis.
    """
    return _nilpotent_exp(annihilation(basis, g), basis.N)


def exp_creation(basis, f):
    """Truncated ``exp(a*(f))``: exact in every matrix entry, lossy as an operator.

    Columns of low-grade states are correct up to the discarded grades above
    ``N``; use :func:`top_grade_mass` on them to gauge what was cut.
    """
    return _nilpotent_exp(creation(basis, f), basis.N)


def exponential_vector(basis, f):
    """Truncated exponential vector ``sum_n f^{(x)n} / sqrt(n!) = exp(a*(f)) Omega``.

    In the occupation basis the coefficient of ``|n_1, ..., n_M>`` is
    ``prod_k f_k^{n_k} / sqrt(n_k!)``.
    """
    f = basis.modes.vector(f)
    occ = basis.occupations
    logfact = 0.5 * gammaln(occ + 1.0).sum(axis=1)
    return np.prod(np.power(f[None, :], occ), axis=1) * np.exp(-logfact)


def exponential_tail_bound(z, N):
    """``sum_{n > N} |z|^n / n!``, the truncation remainder of ``exp(z)``."""
    r = abs(z)
    if r == 0:
        return 0.0
    terms = np.exp(np.arange(N + 1, N + 200) * math.log(r) - gammaln(np.arange(N + 2, N + 201)))
    return float(terms.sum())


def gibbs_trace_expectation(H, beta, A, basis=None):
    """``Tr(exp(-beta H) A) / Tr(exp(-beta H))`` by spectral decomposition.

    Returns
    -------
    Truncated
        ``value`` is the expectation; ``truncation_error`` is the Gibbs weight
        of the top particle sector (0 when no basis is supplied).
    """
    beta = float(beta)
    if not beta > 0:
        raise ValueError("beta must be > 0")
    Hd = dense(H)
    _check_hermitian(Hd)
    lam, V = la.eigh(Hd)
    w = np.exp(-beta * (lam - lam[0]))
    w /= w.sum()
    rho = (V * w) @ V.conj().T
    value = complex(np.trace(rho @ dense(A)))
    err = 0.0
    if basis is not None:
        top = basis.grades == basis.N
        err = float(np.real(np.trace(rho[np.ix_(top, top)])))
    return Truncated(value, err)


def heisenberg_conjugate(H, t, A, basis=None, max_grade=None):
    """``exp(i t H) A exp(-i t H)``.

    The error estimate is the top-grade weight of the result's columns in the
    block with at most ``max_grade`` particles (``N // 2`` by default); 0 when
    no basis is given.
    """
    U = herm_expm(H, 1j * t)
    out = U @ dense(A) @ U.conj().T
    err = 0.0
    if basis is not None:
        max_grade = basis.N // 2 if max_grade is None else max_grade
        err = top_grade_mass(basis, out[:, basis.block(max_grade)])
    return Truncated(out, err)
