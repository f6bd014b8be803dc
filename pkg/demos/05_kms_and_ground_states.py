"""
Thermal and ground states
=========================

Two-point functions of Weyl generators are entire in time.  For a Gibbs
state the value on the upper edge of the strip of width beta equals the
reversed correlation; for the ground state the time dependence has only
nonnegative frequencies.
"""
import math

import numpy as np

from vhmlab.kms import (
    TwoPointFunction,
    ground_spectral_support,
    kms_integral_residual,
    kms_pointwise_residual,
    weakstar_convergence_sweep,
)
from vhmlab.modes import ModeSpace, Source

src = Source(ModeSpace([1.0, math.sqrt(2)]), [0.3, 0.2j])
f, g = np.array([0.5, 0.1j]), np.array([0.2, -0.4])
ts = np.linspace(0, 2 * math.pi, 64)

tpf = TwoPointFunction(2.0, f, g, src)
print("max |A(t + i beta) - B(t)|:", kms_pointwise_residual(tpf, ts))
res = kms_integral_residual(tpf, width=1.0)
print("Gaussian-smeared form:", res.lhs, res.rhs, "tail bound", res.tail_bound)

# spectral support: ground state vs beta = 1 on a commensurate ladder
ladder = Source(ModeSpace([1.0, 2.0]), [0.3, 0.2j])
print("negative-frequency mass, beta=inf:", ground_spectral_support(f, g, ladder).negative_mass)
print("negative-frequency mass, beta=1:  ", ground_spectral_support(f, g, ladder, beta=1.0).negative_mass)

# Gibbs states approach the ground state as beta grows
print("weak-* gaps:", weakstar_convergence_sweep(f, src, [1, 2, 5, 10, 20]))
