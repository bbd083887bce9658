"""Irreducible permutations, their skew forms, and Veech's orbit partition."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations as _itperms
from typing import Iterator, Sequence

from .exact import Matrix, matmul, nullspace, rank

__all__ = [
    "Permutation",
    "is_irreducible",
    "irreducible_permutations",
    "l_matrix",
    "permutation_from_l",
    "sigma",
    "sigma_partition",
    "b_vector",
    "nullspace_basis_from_sigma",
    "tau_dual",
    "reversal_matrix",
]


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection of ``{1..n}``; ``image[i-1] == pi(i)``.

    The extension ``pi(0) = 0`` and ``pi(n+1) = n+1`` is available through
    :meth:`__call__`.
    """

    image: tuple[int, ...]

    def __post_init__(self):
        img = tuple(int(x) for x in self.image)
        object.__setattr__(self, "image", img)
        if len(img) < 2:
            raise ValueError("a permutation needs n >= 2")
        if sorted(img) != list(range(1, len(img) + 1)):
            raise ValueError(f"{list(img)} is not a permutation of 1..{len(img)}")

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        if i == 0 or i == self.n + 1:
            return i
        return self.image[i - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, p in enumerate(self.image, 1):
            inv[p - 1] = i
        return Permutation(tuple(inv))

    def index_of(self, value: int) -> int:
        """``pi^{-1}(value)`` with the 0 / n+1 extension."""
        if value == 0 or value == self.n + 1:
            return value
        return self.image.index(value) + 1

    def to_json(self) -> dict:
        return {"n": self.n, "image": list(self.image)}

    @classmethod
    def from_json(cls, obj) -> "Permutation":
        if isinstance(obj, dict):
            p = cls(tuple(obj["image"]))
            if "n" in obj and obj["n"] != p.n:
                raise ValueError("'n' does not match the image length")
            return p
        return cls(tuple(obj))

    def __str__(self):
        return "(" + ",".join(map(str, self.image)) + ")"


def is_irreducible(pi: Permutation) -> bool:
    """True iff no proper prefix ``{1..k}`` is mapped onto itself."""
    top = 0
    for k, p in enumerate(pi.image[:-1], 1):
        top = max(top, p)
        if top == k:
            return False
    return True


def irreducible_permutations(n: int) -> Iterator[Permutation]:
    """All of S^0_n in lexicographic order."""
    for img in _itperms(range(1, n + 1)):
        p = Permutation(img)
        if is_irreducible(p):
            yield p


def l_matrix(pi: Permutation) -> Matrix:
    n, img = pi.n, pi.image
    return tuple(
        tuple(
            1 if (i < j and img[i] > img[j]) else -1 if (i > j and img[i] < img[j]) else 0
            for j in range(n)
        )
        for i in range(n)
    )


def permutation_from_l(M: Matrix) -> Permutation | None:
    """Invert :func:`l_matrix` via row sums; ``None`` if ``M`` is no ``L_pi``."""
    n = len(M)
    if any(len(r) != n for r in M):
        return None
    cand = []
    for i, row in enumerate(M, 1):
        s = sum(row)
        if s != int(s):
            return None
        cand.append(i + int(s))
    if sorted(cand) != list(range(1, n + 1)):
        return None
    pi = Permutation(tuple(cand))
    return pi if l_matrix(pi) == tuple(tuple(r) for r in M) else None


def sigma(pi: Permutation) -> tuple[int, ...]:
    """``sigma(i) = pi^{-1}(pi(i) + 1) - 1`` on ``{0..n}``."""
    return tuple(pi.index_of(pi(i) + 1) - 1 for i in range(pi.n + 1))


def sigma_partition(pi: Permutation) -> tuple[tuple[int, ...], ...]:
    """Orbits of :func:`sigma`, each listed from its minimum, sorted by minimum."""
    if not is_irreducible(pi):
        raise ValueError(f"{pi} is reducible")
    s = sigma(pi)
    seen = [False] * (pi.n + 1)
    blocks = []
    for start in range(pi.n + 1):
        if seen[start]:
            continue
        orbit, i = [], start
        while not seen[i]:
            seen[i] = True
            orbit.append(i)
            i = s[i]
        blocks.append(tuple(orbit))
    return tuple(blocks)


def b_vector(S: Sequence[int], n: int) -> tuple[int, ...]:
    """``(b_S)_i = chi_S(i-1) - chi_S(i)`` for ``1 <= i <= n``."""
    s = set(S)
    return tuple(int(i - 1 in s) - int(i in s) for i in range(1, n + 1))


def nullspace_basis_from_sigma(pi: Permutation) -> list[tuple[int, ...]]:
    """Greedy independent subset of the ``b_S``, in block order."""
    basis: list[tuple[int, ...]] = []
    for S in sigma_partition(pi):
        b = b_vector(S, pi.n)
        if rank(tuple(basis) + (b,)) > len(basis):
            basis.append(b)
    return basis


def tau_dual(pi: Permutation) -> Permutation:
    n = pi.n
    return Permutation(tuple(n + 1 - pi(n + 1 - i) for i in range(1, n + 1)))


def reversal_matrix(n: int) -> Matrix:
    """``P_n``: the anti-diagonal permutation matrix."""
    return tuple(tuple(int(i + j == n - 1) for j in range(n)) for i in range(n))


def nullity(pi: Permutation) -> int:
    return len(nullspace(l_matrix(pi)))


def conjugate_by_reversal(M: Matrix) -> Matrix:
    P = reversal_matrix(len(M))
    return matmul(matmul(P, M), P)
