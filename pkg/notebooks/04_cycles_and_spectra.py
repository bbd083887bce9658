"""
Cycles in the Rauzy graph and their spectra
===========================================

Products along closed paths preserve the skew form, permute the b-vectors of
the kernel, and (once positive) pair the Perron-Frobenius eigenvalue with its
inverse.
"""

# %%
import numpy as np

from rauzy_lab import Permutation
from rauzy_lab.verify import b_action, enumerate_cycles, perron, pf_pairing_check

pi = Permutation((4, 3, 2, 1))
cycles = enumerate_cycles(pi, 6, "extended")
print(len(cycles.cycles), "cycles of length <= 6")

# %%
# Periods of the action on the b-vectors.
periods = {}
for c in cycles.cycles:
    p = b_action(pi, c.product()).period
    periods[p] = periods.get(p, 0) + 1
print(periods)

# %%
# A positive cycle and its spectrum.
from rauzy_lab.iet import is_positive

pi3 = Permutation((3, 2, 1))
c = next(c for c in enumerate_cycles(pi3, 8, "extended").cycles if is_positive(c.product()))
B = c.product()
print(c.tokens(), B)
rep = perron(B)
print("alpha =", rep.alpha, "u =", np.round(rep.u, 6))
print(np.sort(np.abs(np.linalg.eigvals(np.array(B, dtype=float)))))
print(pf_pairing_check(B, pi3))
