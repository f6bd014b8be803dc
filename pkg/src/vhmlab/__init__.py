"""Numerical laboratory for the van Hove model of a source-coupled boson field.

Two engines are provided.  The algebraic one works with Weyl polynomials,
the free dynamics with a source and quasi-free states in closed form.  The
Hilbert-space one works on truncated Fock spaces and with the dressing
transformation ``exp(a(g))``.  Each is used to cross-check the other.
"""
__version__ = "0.1.0"

from .ccr import QuasiFreeState, WeylPolynomial, state_fourier, tau_apply, weyl_mul
from .fock import FockBasis, build_basis
from .model import CutoffFamily, build_hamiltonian, exact_ground_energy, flow_table
from .modes import ModeMismatchError, ModeSpace, Source

__all__ = [
    "CutoffFamily",
    "FockBasis",
    "ModeMismatchError",
    "ModeSpace",
    "QuasiFreeState",
    "Source",
    "WeylPolynomial",
    "build_basis",
    "build_hamiltonian",
    "exact_ground_energy",
    "flow_table",
    "state_fourier",
    "tau_apply",
    "weyl_mul",
]
