"""Non-unitary dressing ``exp(a(g))`` on the truncated Fock space.

For a dressing argument ``g`` the dressed inner product is
``<phi, psi>_g = <D phi, D psi>`` with ``D = exp(a(g))``, i.e. the Gram
matrix ``G = D* D``.  The dressed Hamiltonian is the operator of the form
``q_g(phi, psi) = <D phi, dGamma D psi>``, represented by the Hermitian
pencil ``(Q, G)`` with ``Q = D* dGamma D``.  Because ``a(g)`` lowers the
particle number, ``D`` restricted to the cutoff space is exact, unit upper
triangular and invertible, so all of this is exact linear algebra.

The cross-link to the algebraic ground state uses ``g = -v/omega``; see
:func:`dressing_argument`.
"""
import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np
import scipy.linalg as la
from scipy.special import factorial

from .fock import (
    creation,
    annihilation,
    dense,
    dgamma,
    exp_annihilation,
    exp_creation,
    exponential_vector,
    top_grade_mass,
    weyl_matrix,
)
from .model import build_hamiltonian, self_energy
from .modes import inner, norm2

PI2 = math.pi ** 2
MAX_CONDITION = 1e12


class IllConditionedError(ValueError):
    """Dressed Gram matrix too ill-conditioned for a reliable pencil solve."""


def dressing_argument(src, convention="shift"):
    """Dressing argument attached to a source.

    ``"shift"`` (default) gives ``g = -v/omega``, the choice under which the
    dressed vacuum reproduces the algebraic ground state, phase included.
    ``"literal"`` gives ``g = +v/omega``.
    """
    if convention == "shift":
        return -src.over_omega
    if convention == "literal":
        return src.over_omega.copy()
    raise ValueError(f"unknown convention {convention!r}")


@dataclass(frozen=True, eq=False)
class DressedSpace:
    """Cutoff basis equipped with the inner product ``<., .>_g``."""

    basis: object
    g: np.ndarray

    @cached_property
    def D(self):
        """Dense ``exp(a(g))``."""
        return dense(exp_annihilation(self.basis, self.g))

    @cached_property
    def D_inv(self):
        """Dense ``exp(a(-g))``, the exact inverse of :attr:`D`."""
        return dense(exp_annihilation(self.basis, -self.g))

    @cached_property
    def gram(self):
        D = self.D
        G = D.conj().T @ D
        return 0.5 * (G + G.conj().T)


def dressed_space(basis, g):
    g = basis.modes.vector(g).copy()
    g.setflags(write=False)
    return DressedSpace(basis, g)


def dressed_inner(space, phi, psi):
    """``<phi, psi>_g = phi* G psi``."""
    return complex(np.vdot(phi, space.gram @ psi))


def tensor_power(basis, f, n):
    """``f^{(x)n}`` in the occupation basis, i.e. ``a*(f)^n Omega / sqrt(n!)``."""
    if n > basis.N:
        raise ValueError(f"n={n} exceeds the cutoff N={basis.N}")
    out = exponential_vector(basis, f) * math.sqrt(math.factorial(n))
    out[basis.grades != n] = 0
    return out


def dressed_norm_tensor_power(f, g, n):
    """Closed form of ``||f^{(x)n}||_g^2``:

    sum_{l=0}^{n} n! / ((n-l)! (l!)^2) |<f, g>|^(2l) ||f||^(2(n-l))
    """
    fg2 = abs(inner(f, g)) ** 2
    ff = norm2(f)
    return float(
        sum(
            factorial(n, exact=True) / (factorial(n - l, exact=True) * factorial(l, exact=True) ** 2)
            * fg2 ** l * ff ** (n - l)
            for l in range(n + 1)
        )
    )


def dressed_form(space, phi, psi):
    """``q_g(phi, psi) = <D phi, dGamma D psi>``."""
    return complex(np.vdot(phi, form_matrix(space) @ psi))


def form_matrix(space):
    """``Q = D* dGamma D``."""
    D = space.D
    Q = D.conj().T @ (dgamma(space.basis) @ D)
    return 0.5 * (Q + Q.conj().T)


@dataclass(frozen=True, eq=False)
class DressedHamiltonian:
    """Pencil ``(Q, G)`` with its generalized eigendecomposition.

    ``eigenvectors`` are ``G``-orthonormal; :attr:`operator` is the matrix of
    the dressed Hamiltonian acting on coefficient vectors, ``G^{-1} Q``.
    """

    space: DressedSpace
    Q: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    condition: float

    @cached_property
    def operator(self):
        return la.cho_solve(la.cho_factor(self.space.gram), self.Q)


def dressed_hamiltonian(space, max_condition=MAX_CONDITION):
    """Solve the Hermitian pencil ``Q x = lambda G x`` by Cholesky reduction.

    Raises
    ------
    IllConditionedError
        If ``cond(G)`` exceeds ``max_condition``; the message names ``||g||``.
    """
    G = space.gram
    cond = float(np.linalg.cond(G))
    if not cond <= max_condition:
        raise IllConditionedError(
            f"dressed Gram matrix has condition number {cond:.3e} > {max_condition:.0e} "
            f"(||g|| = {math.sqrt(norm2(space.g)):.4g})"
        )
    Q = form_matrix(space)
    lam, X = la.eigh(Q, G)
    return DressedHamiltonian(space, Q, lam, X, cond)


def free_spectrum(basis):
    """Sorted ``{sum_k n_k omega_k : sum n_k <= N}`` as a multiset."""
    return np.sort(basis.occupations @ basis.modes.omega)


def iota_apply(space, psi):
    """Embedding ``iota_g psi = D psi`` of the dressed space into Fock space."""
    return space.D @ psi


def iota_inverse(space, phi):
    return space.D_inv @ phi


def exp_vector_g(space, f):
    """Truncated dressed exponential vector ``sum_n f^{(x)n} / sqrt(n!)``.

    Same coefficients as the Fock exponential vector; only the inner product
    used to measure it differs.
    """
    return exponential_vector(space.basis, f)


def exp_vector_overlap_g(h, f, g):
    """``<eps_g(h), eps_g(f)>_g = exp(<h, g> + conj(<f, g>) + <h, f>)``."""
    return complex(np.exp(inner(h, g) + inner(f, g).conjugate() + inner(h, f)))


def pushforward_scalar(f, g):
    """``exp(conj(<f, g>))`` with ``iota_g eps_g(f) = exp(conj(<f, g>)) eps_0(f)``."""
    return complex(np.exp(inner(f, g).conjugate()))


def pi_g_weyl(space, f, h):
    """Closed-form action of ``pi_g(W(f))`` on ``eps_g(h)``.

    Returns ``(phase, argument)`` such that
    ``pi_g(W(f)) eps_g(h) = phase * eps_g(argument)`` with
    ``phase = exp(-pi^2/2 ||f||^2 + i pi <f, g> + i pi <f, h>)`` and
    ``argument = h + i pi f``.
    """
    modes = space.basis.modes
    f, h = modes.vector(f), modes.vector(h)
    g = space.g
    phase = np.exp(-0.5 * PI2 * norm2(f) + 1j * math.pi * inner(f, g) + 1j * math.pi * inner(f, h))
    return complex(phase), h + 1j * math.pi * f


def pi_g_matrix(space, f):
    """Matrix of ``pi_g(W(f))`` on the truncated dressed space.

    ``pi_g`` is the pull-back through ``iota_g`` of the Fock representation
    with the field shifted by ``g``, ``a(f) -> a(f) + <f, g>``.  The shift
    multiplies ``pi_0(W(f))`` by the character ``exp(2 pi i Re<f, g>)``, so

        pi_g(W(f)) = exp(2 pi i Re<f, g>) D^{-1} pi_0(W(f)) D.
    """
    f = space.basis.modes.vector(f)
    character = np.exp(2j * math.pi * inner(f, space.g).real)
    return character * (space.D_inv @ weyl_matrix(space.basis, f) @ space.D)


class GroundExpectation(NamedTuple):
    closed_form: complex
    matrix: complex

    @property
    def deviation(self):
        return abs(self.closed_form - self.matrix)


def ground_weyl_expectation(space, f):
    """``<eps_g(0), pi_g(W(f)) eps_g(0)>_g`` evaluated two independent ways.

    ``closed_form`` composes :func:`pi_g_weyl` with the exponential-vector
    overlap formula; ``matrix`` applies :func:`pi_g_matrix` to the dressed
    vacuum and contracts with the Gram matrix.  Both equal
    ``exp(-pi^2/2 ||f||^2 + 2 pi i Re<f, g>)``.
    """
    modes = space.basis.modes
    zero = modes.zero()
    phase, arg = pi_g_weyl(space, f, zero)
    closed = phase * exp_vector_overlap_g(zero, arg, space.g)
    e0 = space.basis.vacuum()
    matrix = complex(np.vdot(e0, space.gram @ (pi_g_matrix(space, f) @ e0)))
    return GroundExpectation(complex(closed), matrix)


def commutator_checks(basis, f, g):
    """Max entrywise deviation of the two exponential commutator identities.

        [dGamma, exp(a*(f))] = exp(a*(f)) a*(omega f)
        [a(f), exp(a*(g))]   = <f, g> exp(a*(g))

    measured on the block with at most ``N // 2`` particles.
    """
    low = basis.block(basis.N // 2)
    sub = np.ix_(low, low)
    omega = basis.modes.omega
    dG = dense(dgamma(basis))
    Ef = dense(exp_creation(basis, f))
    lhs1 = dG @ Ef - Ef @ dG
    rhs1 = Ef @ dense(creation(basis, omega * basis.modes.vector(f)))
    Eg = dense(exp_creation(basis, g))
    af = dense(annihilation(basis, f))
    lhs2 = af @ Eg - Eg @ af
    rhs2 = inner(f, g) * Eg
    return float(max(np.max(np.abs(lhs1 - rhs1)[sub]), np.max(np.abs(lhs2 - rhs2)[sub])))


class DressingIdentityResiduals(NamedTuple):
    scalar: float
    hamiltonian: float
    tail: float


def dressing_identity_residuals(basis, src, max_grade=None):
    """Deviation of the two Fock-side dressing identities on low-particle states.

    With ``D = exp(a*(-v/omega))``, ``D' = exp(a(-v/omega))`` and
    ``Z = ||D Omega||^2 = exp(||v/omega||^2)``:

        <D phi, D psi> / Z                  = <D' phi, D' psi>
        <D phi, (H + ||v/sqrt(omega)||^2) D psi> / Z = <D' phi, dGamma D' psi>

    Entries are compared over basis states with at most ``max_grade``
    particles (``N // 4`` by default).  ``tail`` is the largest top-two-grade
    weight of ``D e_j`` over those states, normalised by ``sqrt(Z)``.
    """
    max_grade = basis.N // 4 if max_grade is None else max_grade
    low = basis.block(max_grade)
    sub = np.ix_(low, low)
    h = src.center
    Z = math.exp(norm2(h))
    D = dense(exp_creation(basis, h))
    Dp = dense(exp_annihilation(basis, h))
    H = dense(build_hamiltonian(basis, src).matrix) + self_energy(src) * np.eye(basis.dim)
    lhs1 = (D.conj().T @ D) / Z
    rhs1 = Dp.conj().T @ Dp
    lhs2 = (D.conj().T @ H @ D) / Z
    rhs2 = Dp.conj().T @ dense(dgamma(basis)) @ Dp
    tail = top_grade_mass(basis, D[:, low], grades=2) / math.sqrt(Z)
    return DressingIdentityResiduals(
        float(np.max(np.abs(lhs1 - rhs1)[sub])), float(np.max(np.abs(lhs2 - rhs2)[sub])), tail
    )
