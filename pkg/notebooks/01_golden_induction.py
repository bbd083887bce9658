"""
Rauzy induction on a golden rotation
====================================

A two-interval exchange with lengths (phi, 1) is a circle rotation.  We run
right induction on it exactly and watch the matrices.
"""

# %%
from rauzy_lab import Permutation, drive, first_positive_window, golden, make_iet

T = make_iet(Permutation((2, 1)), golden(2))
print(T)

# %%
# Every step compares the last interval with the one sent last; the loser is
# cut down.  Lengths live in Q(sqrt 5), so the comparisons are exact.
trace = drive(T, "right", 8)
for st in trace.steps:
    print(st.kind.name, st.post_perm, st.matrix)

# %%
# The product of the first two matrices is already positive.
k = first_positive_window(trace, 1)
print("first positive window:", (1, k), trace.product(1, k))

# %%
# Lengths transport backwards: lambda = B lambda^(N).
from rauzy_lab.exact import matvec

B = trace.product()
print(matvec(B, trace.final.lengths) == T.lengths)
print([str(x) for x in trace.final.lengths])

# %%
# Three intervals: the golden preset keeps producing positive windows.
T3 = make_iet(Permutation((3, 2, 1)), golden(3))
tr3 = drive(T3, "right", 40)
print([(j, first_positive_window(tr3, j)) for j in range(1, 11)])
