"""
Cross-checking the closed forms in truncated Fock space
=======================================================

The Fock engine builds the van Hove Hamiltonian as a sparse matrix on the
cutoff-N space and compares its dense diagonalisation, Gibbs traces and
Heisenberg evolution with the algebraic closed forms.
"""
import numpy as np

from vhmlab.ccr import QuasiFreeState, WeylPolynomial, state_fourier, tau_apply
from vhmlab.fock import build_basis, dense, gibbs_trace_expectation, heisenberg_conjugate, weyl_matrix
from vhmlab.model import build_hamiltonian, coherent_ground_state, exact_ground_energy, vacuum_overlap
from vhmlab.modes import ModeSpace, Source

modes = ModeSpace([1.0])
src = Source(modes, [0.3])
basis = build_basis(modes, 40)
H = build_hamiltonian(basis, src).matrix

# ground energy and ground state: exact solution against dense diagonalisation
lam, V = np.linalg.eigh(dense(H))
print("E0 dense", lam[0], "exact", exact_ground_energy(src))
print("overlap with coherent state", abs(np.vdot(V[:, 0], coherent_ground_state(basis, src))))
print("vacuum overlap", abs(V[0, 0]), "closed form", vacuum_overlap(src))

# thermal expectation of a Weyl operator: trace over the truncation vs closed form
f = np.array([0.4])
val, err = gibbs_trace_expectation(H, 1.0, weyl_matrix(basis, f), basis)
print("Gibbs trace", val, "closed form", state_fourier(QuasiFreeState.gibbs(src, 1.0), f), "top-sector weight", err)

# Heisenberg evolution vs tau_t on the low-particle block
t = 2.0
(c, h), = tau_apply(t, WeylPolynomial.weyl(f), src).terms
conj, err = heisenberg_conjugate(H, t, weyl_matrix(basis, f), basis, 10)
low = basis.block(10)
dev = np.max(np.abs(conj - c * weyl_matrix(basis, h))[np.ix_(low, low)])
print("Heisenberg vs closed form on <= 10 particles:", dev)
