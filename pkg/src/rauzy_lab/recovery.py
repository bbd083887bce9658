"""Recovering the initial permutation from products of visitation matrices.

Peeling writes a nonnegative unimodular matrix as a product of elementary
Rauzy matrices starting from a given permutation: each candidate first factor
``A`` is stripped off as ``A^{-1} B`` and kept only while the remainder stays
nonnegative.  Every such strip lowers the entry sum, so the search is finite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from . import _config
from .exact import (
    Matrix,
    determinant,
    identity,
    is_integer_matrix,
    matmul,
    transpose,
    unimodular_inverse,
)
from .iet import IET, StepKind, elementary_matrix, permutation_step, product, step_left, step_right
from .induced import _check_interval
from .permutations import Permutation, irreducible_permutations, is_irreducible, l_matrix, permutation_from_l

__all__ = [
    "InvalidProduct",
    "RealizationPath",
    "Candidate",
    "RecoveryReport",
    "peel_decompose",
    "peel_all",
    "recover_weak",
    "recover_strict",
    "realize_interval",
]


class InvalidProduct(ValueError):
    def __init__(self, message: str, index: int | None = None):
        super().__init__(message if index is None else f"product {index}: {message}")
        self.index = index


@dataclass(frozen=True)
class RealizationPath:
    base: Permutation
    kinds: tuple
    end: Permutation

    def __post_init__(self):
        object.__setattr__(self, "kinds", tuple(self.kinds))
        pi = self.base
        for k in self.kinds:
            pi = permutation_step(pi, k)
        if pi != self.end:
            raise ValueError("path does not replay to its end permutation")

    def __len__(self):
        return len(self.kinds)

    def matrices(self) -> list[Matrix]:
        out, pi = [], self.base
        for k in self.kinds:
            out.append(elementary_matrix(pi, k))
            pi = permutation_step(pi, k)
        return out

    def product(self) -> Matrix:
        return product(self.matrices(), self.base.n)

    def tokens(self) -> list[str]:
        return [k.name for k in self.kinds]

    def permutations(self) -> list[Permutation]:
        out = [self.base]
        for k in self.kinds:
            out.append(permutation_step(out[-1], k))
        return out


@lru_cache(maxsize=None)
def _elementary_inverse(pi: Permutation, kind: StepKind) -> Matrix:
    return unimodular_inverse(elementary_matrix(pi, kind))


def _validate(B: Matrix, n: int, index: int | None = None) -> Matrix:
    B = tuple(tuple(row) for row in B)
    if len(B) != n or any(len(r) != n for r in B):
        raise InvalidProduct(f"expected a {n}x{n} matrix", index)
    if not is_integer_matrix(B):
        raise InvalidProduct("entries must be integers", index)
    B = tuple(tuple(int(x) for x in row) for row in B)
    if any(x < 0 for row in B for x in row):
        raise InvalidProduct("negative entry", index)
    d = determinant(B)
    if d not in (1, -1):
        raise InvalidProduct(f"determinant {d} is not +-1", index)
    return B


def _peel(B: Matrix, pi: Permutation, memo: dict) -> dict:
    """All reachable end permutations, each with its first path in search order."""
    key = (pi, B)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if B == identity(pi.n):
        out = {pi: ()}
    else:
        out: dict = {}
        for kind in StepKind:
            C = matmul(_elementary_inverse(pi, kind), B)
            if any(x < 0 for row in C for x in row):
                continue
            for end, path in _peel(C, permutation_step(pi, kind), memo).items():
                out.setdefault(end, (kind,) + path)
    memo[key] = out
    return out


def peel_all(B: Matrix, pi: Permutation, memo: dict | None = None) -> dict[Permutation, RealizationPath]:
    """Every end permutation reachable by factoring ``B`` from ``pi``."""
    if not is_irreducible(pi):
        raise ValueError(f"{pi} is reducible")
    B = _validate(B, pi.n)
    found = _peel(B, pi, {} if memo is None else memo)
    return {end: RealizationPath(pi, path, end) for end, path in found.items()}


def peel_decompose(B: Matrix, pi: Permutation, end: Permutation | None = None,
                   memo: dict | None = None) -> RealizationPath | None:
    """First factorization of ``B`` into elementary matrices starting at ``pi``.

    Kinds are tried in the order R0, R1, L0, L1.  With ``end`` given, only
    paths finishing at that permutation count.
    """
    paths = peel_all(B, pi, memo)
    if end is not None:
        return paths.get(end)
    if not paths:
        return None
    # depth-first order: compare the kind sequences lexicographically
    return min(paths.values(), key=lambda p: [list(StepKind).index(k) for k in p.kinds])


@dataclass(frozen=True)
class Candidate:
    pi: Permutation
    chain: tuple
    paths: tuple | None = None

    def to_json(self) -> dict:
        out = {"pi": list(self.pi.image), "chain": [list(p.image) for p in self.chain]}
        if self.paths is not None:
            out["paths"] = [p.tokens() for p in self.paths]
        return out


@dataclass(frozen=True)
class RecoveryReport:
    n: int
    products: tuple
    mode: str
    candidates: tuple
    prefix_counts: tuple = field(default=())

    @property
    def permutations(self) -> list[Permutation]:
        return [c.pi for c in self.candidates]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "mode": self.mode,
            "candidates": [c.to_json() for c in self.candidates],
            "prefix_counts": list(self.prefix_counts),
        }


def _check_sizes(Bs: Sequence[Matrix], n: int) -> tuple:
    out = []
    for k, B in enumerate(Bs, 1):
        B = tuple(tuple(row) for row in B)
        if len(B) != n or any(len(r) != n for r in B):
            raise ValueError(f"product {k} is not {n}x{n}")
        out.append(B)
    return tuple(out)


def recover_weak(Bs: Sequence[Matrix], n: int) -> RecoveryReport:
    """Candidates whose chain ``L_k = B_k^T L_{k-1} B_k`` stays an irreducible ``L_pi``."""
    Bs = _check_sizes(Bs, n)
    for k, B in enumerate(Bs, 1):
        if not is_integer_matrix(B) or determinant(B) == 0:
            raise ValueError(f"product {k} is not an invertible integer matrix")
    counts = [0] * len(Bs)
    candidates = []
    for pi in irreducible_permutations(n):
        chain = [pi]
        for k, B in enumerate(Bs):
            nxt = permutation_from_l(matmul(matmul(transpose(B), l_matrix(chain[-1])), B))
            if nxt is None or not is_irreducible(nxt):
                break
            chain.append(nxt)
            counts[k] += 1
        else:
            candidates.append(Candidate(pi, tuple(chain)))
    return RecoveryReport(n, Bs, "weak", tuple(candidates), tuple(counts))


def recover_strict(Bs: Sequence[Matrix], n: int, memo: dict | None = None) -> RecoveryReport:
    """Candidates from which every ``B_k`` factors into consecutive Rauzy steps."""
    Bs = tuple(_validate(B, n, k) for k, B in enumerate(Bs, 1))
    memo = {} if memo is None else memo
    counts = [0] * len(Bs)
    candidates = []
    for pi in irreducible_permutations(n):
        # layers[k][p] = (predecessor, path) for permutations reached after B_1..B_k
        layers: list[dict] = [{pi: None}]
        for k, B in enumerate(Bs):
            nxt: dict = {}
            for p in layers[-1]:
                for end, path in _peel(B, p, memo).items():
                    nxt.setdefault(end, (p, path))
            if not nxt:
                break
            counts[k] += 1
            layers.append(nxt)
        if len(layers) != len(Bs) + 1:
            continue
        cur = min(layers[-1])
        chain, paths = [cur], []
        for k in range(len(Bs), 0, -1):
            prev, path = layers[k][cur]
            paths.append(RealizationPath(prev, path, cur))
            chain.append(prev)
            cur = prev
        candidates.append(Candidate(pi, tuple(reversed(chain)), tuple(reversed(paths))))
    return RecoveryReport(n, Bs, "strict", tuple(candidates), tuple(counts))


def realize_interval(T: IET, J: tuple, cap: int | None = None) -> RealizationPath | None:
    """Extended Rauzy path from ``T``'s domain down to ``J``, or ``None``.

    Left steps are taken while ``a`` is not within the next left cut, right
    steps while ``b`` is not within the next right cut.  When both hold
    before reaching ``J`` the interval is not admissible.
    """
    a, b = _check_interval(T, *J)
    limit = _config.cap(_config.STEP_CAP if cap is None else cap)
    kinds: list[StepKind] = []
    cur = T
    while True:
        if cur.origin == a and cur.end == b:
            return RealizationPath(T.pi, tuple(kinds), cur.pi)
        if len(kinds) >= limit:
            raise RuntimeError(f"realization exceeded {limit} steps")
        n = cur.n
        left_cut = min(cur.lengths[0], cur.lengths[cur.pi.index_of(1) - 1])
        right_cut = min(cur.lengths[n - 1], cur.lengths[cur.pi.index_of(n) - 1])
        if not (cur.origin <= a < cur.origin + left_cut):
            st, cur = step_left(cur, len(kinds) + 1)
        elif not (cur.end - right_cut < b <= cur.end):
            st, cur = step_right(cur, len(kinds) + 1)
        else:
            return None
        kinds.append(st.kind)
