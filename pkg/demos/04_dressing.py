"""
The dressing transformation
===========================

exp(a(g)) is exact on the truncated space.  It defines a new inner product
<phi, psi>_g = <D phi, D psi>, and the dressed Hamiltonian, obtained from
the pencil (D* dGamma D, D* D), has exactly the free spectrum.  With
g = -v/omega the dressed vacuum reproduces the algebraic ground state.
"""
import math

import numpy as np

from vhmlab.ccr import QuasiFreeState, state_fourier
from vhmlab.dressing import (
    dressed_hamiltonian,
    dressed_inner,
    dressed_norm_tensor_power,
    dressed_space,
    dressing_argument,
    dressing_identity_residuals,
    free_spectrum,
    ground_weyl_expectation,
    tensor_power,
)
from vhmlab.fock import build_basis
from vhmlab.modes import ModeSpace, Source

modes = ModeSpace([1.0, math.sqrt(2)])
basis = build_basis(modes, 4)
space = dressed_space(basis, [0.6 - 0.2j, 0.3j])

dh = dressed_hamiltonian(space)
print("pencil eigenvalues", np.round(np.sort(dh.eigenvalues), 12))
print("free spectrum     ", np.round(free_spectrum(basis), 12))
print("Gram condition number", dh.condition)

# norm of a tensor power in the dressed product: matrix vs closed form
e = np.array([1.0, 0.0])
f2 = tensor_power(basis, e, 2)
print("||e (x) e||_g^2 with g = e:", dressed_inner(dressed_space(basis, e), f2, f2).real,
      dressed_norm_tensor_power(e, e, 2))

# the dressing identities relating H + self energy to dGamma
one = ModeSpace([1.0])
print(dressing_identity_residuals(build_basis(one, 40), Source(one, [0.5])))

# ground-state expectation from the dressed side vs the algebraic ground state
src = Source(modes, [0.4, -0.3j])
f = np.array([0.2, 0.1j])
val = ground_weyl_expectation(dressed_space(build_basis(modes, 20), dressing_argument(src)), f)
print("dressed", val.closed_form, "matrix", val.matrix)
print("algebraic", state_fourier(QuasiFreeState.gibbs(src, math.inf), f))
