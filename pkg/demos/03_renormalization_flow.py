"""
Removing the cutoff
===================

Three source profiles on the ladder omega_k = sqrt(1 + k^2).  The self
energy diverges for the critical and severe ones, but only the severe
profile drives the vacuum overlap to zero: there v/omega leaves l^2 and the
ground state stops being a vector of the Fock space.
"""
from vhmlab.model import CutoffFamily, flow_table, overlap_threshold

lambdas = [10, 50, 100, 200, 1000]
for profile in ("mild", "critical", "severe"):
    print(profile)
    for row in flow_table(CutoffFamily(profile), lambdas):
        print(f"  Lambda={row.lam:5d}  self_energy={row.self_energy:12.4f}  vacuum_overlap={row.vacuum_overlap:.6f}")

# where the severe overlap first drops below 1%, from the partial sums
print("Lambda* =", overlap_threshold(CutoffFamily("severe"), 0.01))
