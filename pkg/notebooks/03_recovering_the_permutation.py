"""
Recovering a permutation from its matrices
==========================================

Given only grouped products B_1, ..., B_m of Rauzy matrices, which starting
permutations could have produced them?
"""

# %%
import random

from rauzy_lab import Permutation, drive, group_products, make_iet
from rauzy_lab.instances import random_quadratic_lengths
from rauzy_lab.permutations import irreducible_permutations
from rauzy_lab.recovery import peel_all, recover_strict, recover_weak

rng = random.Random(7)
pi = rng.choice(list(irreducible_permutations(4)))
T = make_iet(pi, random_quadratic_lengths(4, rng))
tr = drive(T, "alternate", 24)
Bs = list(group_products(tr, (6, 13, 24)))
print("true start:", list(pi.image))
print(tr.product())

# %%
# With only the first block, the weak test (which tracks the skew forms
# B^T L B) cannot tell two starts apart.
print("weak, B_1:", [list(p.image) for p in recover_weak(Bs[:1], 4).permutations])

# %%
# Strict recovery asks each B_l to factor into consecutive Rauzy steps, which
# already settles it.
strict = recover_strict(Bs[:1], 4)
print("strict, B_1:", [list(p.image) for p in strict.permutations])
print(strict.candidates[0].paths[0].tokens())

# %%
# The full sequence ends in a positive product; both tests agree.
print("weak:", [list(p.image) for p in recover_weak(Bs, 4).permutations])
print("strict:", [list(p.image) for p in recover_strict(Bs, 4).permutations])

# %%
# Peeling the whole product from every irreducible start.
B = tr.product()
for p in irreducible_permutations(4):
    ends = peel_all(B, p)
    if ends:
        print(list(p.image), "->", [list(e.image) for e in ends])
