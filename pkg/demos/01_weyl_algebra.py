"""
Weyl algebra and the van Hove dynamics
======================================

Symbolic Weyl polynomials multiply with an exact phase cocycle, and the
dynamics with a source acts on them in closed form.  Everything here is exact
up to rounding; no Hilbert space is involved.
"""
import math

import numpy as np

from vhmlab.ccr import (
    QuasiFreeState,
    WeylPolynomial,
    state_eval,
    state_fourier,
    tau_apply,
    tau_group_check,
    weyl_distance,
)
from vhmlab.modes import ModeSpace, Source

W = WeylPolynomial.weyl

# one mode at unit frequency; W(1) W(i) picks up exp(-i pi^2 Im<1, i>)
print(W([1.0]) * W([1j]))

# the product is associative and W(f)* W(f) is the identity
f, g, h = np.array([0.3 + 0.1j]), np.array([-0.2j]), np.array([0.5])
print("associativity deviation:", weyl_distance((W(f) * W(g)) * W(h), W(f) * (W(g) * W(h))))
print("unitarity deviation:", weyl_distance(W(f).adjoint() * W(f), WeylPolynomial.identity(1)))

# a source v shifts the field; tau_t rotates the symbol and adds a phase
src = Source(ModeSpace([1.0, 2.0]), [0.3, 0.1j])
a = WeylPolynomial(2, [(1.0, [0.2, 0.1]), (0.5j, [0.0, 0.4])])
print(tau_apply(1.3, a, src))
print("group law deviation:", tau_group_check(0.7, 2.1, a, src))

# Gibbs states are quasi-free and invariant under the dynamics
for beta in (1.0, 5.0, math.inf):
    st = QuasiFreeState.gibbs(src, beta)
    before = state_fourier(st, [0.2, 0.1])
    after = state_eval(st, tau_apply(3.0, W([0.2, 0.1]), src))
    print(f"beta={beta}: omega(W(f)) = {before:.6f}, after tau_3: {after:.6f}")
