"""
First returns and natural decompositions
========================================

Inducing on a sub-interval J cuts it into pieces on which the return word is
constant.  Only some J give exactly n pieces.
"""

# %%
from fractions import Fraction

from rauzy_lab import Permutation, drive, make_iet, natural_decomposition, silver
from rauzy_lab.induced import induced_iet, visitation_from_decomposition
from rauzy_lab.recovery import realize_interval

T = make_iet(Permutation((4, 3, 2, 1)), silver(4))
print([str(x) for x in T.lengths])

# %%
# A generic sub-interval: n + 2 pieces, so it is not admissible.
J = (Fraction(1, 3) * T.end, Fraction(2, 3) * T.end)
dec = natural_decomposition(T, J)
for p in dec.pieces:
    print(p.r, p.word)
print("pieces:", dec.m, "admissible:", dec.admissible)
print("realizable:", realize_interval(T, J))

# %%
# Domains of induction steps are admissible, and the counting matrix of the
# return words equals the product of Rauzy matrices.
tr = drive(T, "RLRRL")
S = tr.final
K = (S.origin, S.end)
A = visitation_from_decomposition(T, K)
print(A == tr.product())
print(induced_iet(T, K, keep_origin=True) == S)

# %%
# Realization rebuilds a path to K from the interval alone.  It may take a
# different route than the drive did, but it lands on the same matrix.
path = realize_interval(T, K)
print(path.tokens(), [k.name for k in tr.kinds])
print(path.product() == A, path.end == S.pi)
