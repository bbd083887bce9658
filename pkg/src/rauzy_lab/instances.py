"""Length vectors over real quadratic fields.

Named presets for the command line, random quadratic lengths, and
self-similar IETs built from the Perron-Frobenius vector of a positive
Rauzy cycle (these admit infinitely many induction steps on every side).
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .exact import QuadraticNumber, identity, kernel, matvec, sqrt, squarefree_part
from .iet import IET, StepKind, is_positive, make_iet
from .permutations import Permutation
from .recovery import RealizationPath

__all__ = ["golden", "silver", "preset", "random_quadratic_lengths", "self_similar_iet"]


def _frac_part(x: QuadraticNumber) -> QuadraticNumber:
    return x - x.floor()


def golden(n: int) -> tuple:
    """``(phi, 1, {3 phi}, {4 phi}, ...)`` with ``phi = (1 + sqrt 5)/2``."""
    phi = (1 + sqrt(5)) / 2
    lengths = [phi, QuadraticNumber(1, 0, 5)]
    lengths += [_frac_part(k * phi) for k in range(3, n + 1)]
    return tuple(lengths[:n])


def silver(n: int) -> tuple:
    """``(1 + sqrt 2, 1, {3 sqrt 2}, {4 sqrt 2}, ...)``."""
    r2 = sqrt(2)
    lengths = [1 + r2, QuadraticNumber(1, 0, 2)]
    lengths += [_frac_part(k * r2) for k in range(3, n + 1)]
    return tuple(lengths[:n])


def preset(name: str, n: int) -> tuple:
    try:
        return {"golden": golden, "silver": silver}[name](n)
    except KeyError:
        raise ValueError(f"unknown length preset {name!r}") from None


def random_quadratic_lengths(n: int, rng: random.Random, D: int = 5, size: int = 40) -> tuple:
    """Positive ``a + b sqrt(D)`` with small random rational ``a``, ``b``."""
    r = sqrt(D)
    out = []
    while len(out) < n:
        x = Fraction(rng.randint(-size, size), rng.randint(1, 9)) + Fraction(rng.randint(1, size), rng.randint(1, 9)) * r
        if x > 0:
            out.append(x)
    return tuple(out)


def _quadratic_pf(B) -> QuadraticNumber | None:
    # the PF eigenvalue of a symplectic-type cycle matrix is a unit alpha with
    # alpha + 1/alpha = t an integer when it is quadratic
    import numpy as np

    w = np.linalg.eigvals(np.array(B, dtype=float))
    alpha = max(w.real)
    t = round(alpha + 1 / alpha)
    disc = t * t - 4
    if disc <= 0:
        return None
    k, d = squarefree_part(disc)
    if d == 1:
        return None
    return (t + k * QuadraticNumber(0, 1, d)) / 2


def self_similar_iet(pi: Permutation, kinds: Sequence[StepKind]) -> IET | None:
    """IET whose lengths are the PF vector of a positive cycle product.

    Returns ``None`` when the product is not positive or its PF eigenvalue
    is not quadratic.
    """
    path = RealizationPath(pi, tuple(kinds), pi)
    B = path.product()
    if not is_positive(B):
        return None
    alpha = _quadratic_pf(B)
    if alpha is None:
        return None
    n = pi.n
    I = identity(n)
    shifted = tuple(tuple(B[i][j] - alpha * I[i][j] for j in range(n)) for i in range(n))
    ker = kernel(shifted)
    if len(ker) != 1:
        return None
    v = ker[0]
    if v[0] < 0:
        v = tuple(-x for x in v)
    if any(not (x > 0) for x in v):
        return None
    # scale to total length 1
    total = sum(v, QuadraticNumber(0, 0, alpha.D))
    lengths = tuple(QuadraticNumber(0, 0, alpha.D) + x / total for x in v)
    if matvec(B, lengths) != tuple(alpha * x for x in lengths):
        raise AssertionError("not an eigenvector")
    return make_iet(pi, lengths)
