"""Interval exchange transformations and extended Rauzy induction."""

from __future__ import annotations

import bisect
import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from . import _config
from .exact import (
    Matrix,
    Scalar,
    as_scalar,
    decode_scalar,
    determinant,
    encode_matrix,
    encode_scalar,
    identity,
    matmul,
    matvec,
    transpose,
)
from .permutations import (
    Permutation,
    conjugate_by_reversal,
    is_irreducible,
    l_matrix,
    tau_dual,
)

__all__ = [
    "ReducibleError",
    "TieError",
    "DomainError",
    "StepCapExceeded",
    "StepKind",
    "IET",
    "InductionStep",
    "InductionTrace",
    "GroupedProducts",
    "make_iet",
    "evaluate",
    "elementary_matrix",
    "permutation_step",
    "step_right",
    "step_left",
    "step",
    "drive",
    "group_products",
    "first_positive_window",
    "product",
    "is_positive",
    "is_unimodular",
    "left_matrix_by_duality",
]


class ReducibleError(ValueError):
    pass


class TieError(ArithmeticError):
    """The two competing lengths are equal; induction is undefined."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class DomainError(ValueError):
    pass


class StepCapExceeded(RuntimeError):
    pass


class StepKind(enum.Enum):
    """Right types 0/1 and left types 0~/1~, in depth-first search order."""

    R0 = ("R", 0)
    R1 = ("R", 1)
    L0 = ("L", 0)
    L1 = ("L", 1)

    @property
    def side(self) -> str:
        return self.value[0]

    @property
    def type(self) -> int:
        return self.value[1]

    @classmethod
    def of(cls, side: str, type_: int) -> "StepKind":
        return cls((side.upper()[0], int(type_)))

    @classmethod
    def parse(cls, token: str) -> "StepKind":
        return cls[token.strip().upper()]

    def __lt__(self, other):
        order = list(StepKind)
        return order.index(self) < order.index(other)


@dataclass(frozen=True)
class IET:
    """``T(x) = x + omega_j`` on ``I_j = [beta_{j-1}, beta_j)``.

    ``breakpoints`` holds ``beta_0 .. beta_n`` in absolute coordinates, so
    ``beta_0 == origin``.
    """

    pi: Permutation
    lengths: tuple
    origin: Scalar = 0
    breakpoints: tuple = field(init=False, repr=False, compare=False)
    translations: tuple = field(init=False, repr=False, compare=False)
    _image_starts: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        lengths = tuple(as_scalar(x) for x in self.lengths)
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "origin", as_scalar(self.origin))
        n = self.pi.n
        if len(lengths) != n:
            raise ValueError(f"expected {n} lengths, got {len(lengths)}")
        if not is_irreducible(self.pi):
            raise ReducibleError(f"{self.pi} is reducible")
        if any(not (x > 0) for x in lengths):
            raise ValueError("lengths must be positive")
        beta = [self.origin]
        for x in lengths:
            beta.append(beta[-1] + x)
        omega = matvec(l_matrix(self.pi), lengths)
        # direct formula as a cross-check of omega = L_pi lambda
        img = self.pi.image
        for j in range(n):
            direct = sum((lengths[i] for i in range(n) if img[i] < img[j]), 0) - sum(lengths[:j], 0)
            if direct != omega[j]:
                raise AssertionError("omega != L_pi lambda")
        order = [self.pi.index_of(p) for p in range(1, n + 1)]
        starts = [self.origin]
        for j in order[:-1]:
            starts.append(starts[-1] + lengths[j - 1])
        object.__setattr__(self, "breakpoints", tuple(beta))
        object.__setattr__(self, "translations", tuple(omega))
        object.__setattr__(self, "_image_starts", tuple(starts))

    @property
    def n(self) -> int:
        return self.pi.n

    @property
    def total_length(self):
        return self.breakpoints[-1] - self.origin

    @property
    def end(self):
        return self.breakpoints[-1]

    def interval_index(self, x) -> int:
        """The ``j`` (1-based) with ``x`` in ``I_j``."""
        if not (self.origin <= x < self.end):
            raise DomainError(f"{x} is outside [{self.origin}, {self.end})")
        return bisect.bisect_right(self.breakpoints, x)

    def __call__(self, x):
        return x + self.translations[self.interval_index(x) - 1]

    def inverse(self, y):
        if not (self.origin <= y < self.end):
            raise DomainError(f"{y} is outside [{self.origin}, {self.end})")
        pos = bisect.bisect_right(self._image_starts, y)
        j = self.pi.index_of(pos)
        return y - self.translations[j - 1]

    def translated(self, origin=0) -> "IET":
        return IET(self.pi, self.lengths, origin)

    def to_json(self) -> dict:
        return {
            "pi": self.pi.to_json(),
            "lambda": [encode_scalar(x) for x in self.lengths],
            "origin": encode_scalar(self.origin),
        }

    @classmethod
    def from_json(cls, obj) -> "IET":
        return cls(
            Permutation.from_json(obj["pi"]),
            tuple(decode_scalar(x) for x in obj["lambda"]),
            decode_scalar(obj.get("origin", "0")),
        )


def make_iet(pi: Permutation | Sequence[int], lengths: Iterable, origin=0) -> IET:
    if not isinstance(pi, Permutation):
        pi = Permutation(tuple(pi))
    return IET(pi, tuple(lengths), origin)


def evaluate(T: IET, x):
    return T(x)


# ---------------------------------------------------------------------------
# combinatorics of a single step
# ---------------------------------------------------------------------------

def _right_perm(pi: Permutation, t: int) -> Permutation:
    n, img = pi.n, pi.image
    m = pi.index_of(n)
    if t == 0:
        pn = img[n - 1]
        new = []
        for i in range(1, n + 1):
            p = img[i - 1]
            if i == n or p < pn:
                new.append(p)
            elif p == n:
                new.append(pn + 1)
            else:
                new.append(p + 1)
        return Permutation(tuple(new))
    new = []
    for i in range(1, n + 1):
        if i <= m:
            new.append(img[i - 1])
        elif i == m + 1:
            new.append(img[n - 1])
        else:
            new.append(img[i - 2])
    return Permutation(tuple(new))


def _right_matrix(pi: Permutation, t: int) -> Matrix:
    n = pi.n
    m = pi.index_of(n)
    A = [[0] * n for _ in range(n)]
    if t == 0:
        for i in range(n):
            A[i][i] = 1
        A[n - 1][m - 1] = 1
    else:
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if (i == j <= m) or (j == i + 1 and m <= i < n) or (i == n and j == m + 1):
                    A[i - 1][j - 1] = 1
    return tuple(map(tuple, A))


def _left_perm(pi: Permutation, t: int) -> Permutation:
    n, img = pi.n, pi.image
    mp = pi.index_of(1)
    p1 = img[0]
    new = []
    if t == 0:
        for i in range(1, n + 1):
            p = img[i - 1]
            if i == mp:
                new.append(p1 - 1)
            elif 1 < p < p1:
                new.append(p - 1)
            else:
                new.append(p)
    else:
        for i in range(1, n + 1):
            if i < mp - 1:
                new.append(img[i])
            elif i == mp - 1:
                new.append(p1)
            else:
                new.append(img[i - 1])
    return Permutation(tuple(new))


def _left_matrix(pi: Permutation, t: int) -> Matrix:
    n = pi.n
    mp = pi.index_of(1)
    A = [[0] * n for _ in range(n)]
    if t == 0:
        for i in range(n):
            A[i][i] = 1
        A[0][mp - 1] = 1
    else:
        # lambda_1 = l'_{m'-1}; lambda_i = l'_{i-1} (1 < i < m');
        # lambda_{m'} = l'_{m'-1} + l'_{m'}; lambda_i = l'_i (i > m')
        A[0][mp - 2] = 1
        for i in range(2, mp):
            A[i - 1][i - 2] = 1
        A[mp - 1][mp - 2] = 1
        A[mp - 1][mp - 1] = 1
        for i in range(mp + 1, n + 1):
            A[i - 1][i - 1] = 1
    return tuple(map(tuple, A))


@lru_cache(maxsize=None)
def permutation_step(pi: Permutation, kind: StepKind) -> Permutation:
    """Combinatorial successor of ``pi`` under one step of the given kind."""
    if not is_irreducible(pi):
        raise ReducibleError(f"{pi} is reducible")
    if kind.side == "R":
        return _right_perm(pi, kind.type)
    return _left_perm(pi, kind.type)


@lru_cache(maxsize=None)
def elementary_matrix(pi: Permutation, kind: StepKind) -> Matrix:
    """Visitation matrix ``A`` of one step, so that ``lambda = A lambda'``."""
    if not is_irreducible(pi):
        raise ReducibleError(f"{pi} is reducible")
    if kind.side == "R":
        return _right_matrix(pi, kind.type)
    return _left_matrix(pi, kind.type)


def left_matrix_by_duality(pi: Permutation, t: int) -> Matrix:
    """``P_n A_{(pi_tau, t)} P_n``, the left matrix computed through reversal."""
    return conjugate_by_reversal(_right_matrix(tau_dual(pi), t))


# ---------------------------------------------------------------------------
# steps on IETs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InductionStep:
    kind: StepKind
    pre_perm: Permutation
    post_perm: Permutation
    matrix: Matrix

    def to_json(self) -> dict:
        return {
            "side": self.kind.side,
            "type": self.kind.type,
            "A": encode_matrix(self.matrix),
            "pi": self.post_perm.to_json(),
        }


def _right_lengths(lam: tuple, m: int, t: int) -> tuple:
    n = len(lam)
    if t == 0:
        return lam[: n - 1] + (lam[n - 1] - lam[m - 1],)
    return lam[: m - 1] + (lam[m - 1] - lam[n - 1], lam[n - 1]) + lam[m : n - 1]


def _left_lengths(lam: tuple, mp: int, t: int) -> tuple:
    if t == 0:
        return (lam[0] - lam[mp - 1],) + lam[1:]
    return lam[1 : mp - 1] + (lam[0], lam[mp - 1] - lam[0]) + lam[mp:]


def step_right(T: IET, index: int | None = None) -> tuple[InductionStep, IET]:
    n = T.n
    m = T.pi.index_of(n)
    ln, lm = T.lengths[n - 1], T.lengths[m - 1]
    if ln == lm:
        raise TieError(f"lambda_n == lambda_m ({ln}); Rauzy induction is undefined", index)
    t = 0 if ln > lm else 1
    kind = StepKind.of("R", t)
    new_lengths = _right_lengths(T.lengths, m, t)
    return _finish(T, kind, new_lengths, T.origin)


def step_left(T: IET, index: int | None = None) -> tuple[InductionStep, IET]:
    mp = T.pi.index_of(1)
    l1, lm = T.lengths[0], T.lengths[mp - 1]
    if l1 == lm:
        raise TieError(f"lambda_1 == lambda_m' ({l1}); left induction is undefined", index)
    t = 0 if l1 > lm else 1
    kind = StepKind.of("L", t)
    new_lengths = _left_lengths(T.lengths, mp, t)
    return _finish(T, kind, new_lengths, T.origin + min(l1, lm))


def _finish(T: IET, kind: StepKind, new_lengths: tuple, origin) -> tuple[InductionStep, IET]:
    A = elementary_matrix(T.pi, kind)
    post = permutation_step(T.pi, kind)
    if matvec(A, new_lengths) != T.lengths:
        raise AssertionError("lambda != A lambda'")
    nxt = IET(post, new_lengths, origin)
    return InductionStep(kind, T.pi, post, A), nxt


def step(T: IET, side: str, index: int | None = None) -> tuple[InductionStep, IET]:
    side = side.upper()[0]
    if side == "R":
        return step_right(T, index)
    if side == "L":
        return step_left(T, index)
    raise ValueError(f"unknown side {side!r}")


# ---------------------------------------------------------------------------
# drives and grouped products
# ---------------------------------------------------------------------------

def product(matrices: Iterable[Matrix], n: int | None = None) -> Matrix:
    out = None
    for A in matrices:
        out = A if out is None else matmul(out, A)
    if out is None:
        if n is None:
            raise ValueError("empty product needs an explicit size")
        return identity(n)
    return out


def is_positive(M: Matrix) -> bool:
    return all(x > 0 for row in M for x in row)


@dataclass(frozen=True)
class InductionTrace:
    initial: IET
    steps: tuple
    states: tuple

    @property
    def matrices(self) -> list[Matrix]:
        return [s.matrix for s in self.steps]

    @property
    def kinds(self) -> list[StepKind]:
        return [s.kind for s in self.steps]

    @property
    def final(self) -> IET:
        return self.states[-1] if self.states else self.initial

    def product(self, start: int = 1, stop: int | None = None) -> Matrix:
        """``A_start ... A_stop`` (1-based, inclusive)."""
        stop = len(self.steps) if stop is None else stop
        return product(self.matrices[start - 1 : stop], self.initial.n)

    def to_json(self) -> dict:
        return {
            "pi0": self.initial.pi.to_json(),
            "lambda0": [encode_scalar(x) for x in self.initial.lengths],
            "steps": [s.to_json() for s in self.steps],
        }


def _sides(policy, N: int) -> list[str]:
    if isinstance(policy, str):
        p = policy.lower()
        if p in ("right", "always-right", "r"):
            return ["R"] * N
        if p in ("left", "always-left", "l"):
            return ["L"] * N
        if p in ("alternate", "alt"):
            return ["R" if k % 2 == 0 else "L" for k in range(N)]
        if set(policy.upper()) <= {"R", "L"}:
            policy = list(policy.upper())
        else:
            raise ValueError(f"unknown policy {policy!r}")
    sides = [str(s).upper()[0] for s in policy]
    if len(sides) < N or any(s not in "RL" for s in sides):
        raise ValueError("explicit side list is too short or malformed")
    return sides[:N]


def drive(T: IET, policy="right", N: int | None = None, cap: int | None = None) -> InductionTrace:
    """Run ``N`` steps of extended induction, choosing sides by ``policy``.

    ``policy`` is ``"right"``, ``"left"``, ``"alternate"`` or an explicit
    sequence of ``"R"``/``"L"``.  A :class:`TieError` carries the 1-based
    index of the failing step.
    """
    if N is None:
        if isinstance(policy, str) and policy.lower() in ("right", "left", "alternate", "always-right", "always-left", "alt", "r", "l"):
            raise ValueError("N is required for named policies")
        N = len(policy)
    if N < 1:
        raise ValueError("a drive needs N >= 1 steps")
    limit = _config.cap(_config.STEP_CAP if cap is None else cap)
    if N > limit:
        raise StepCapExceeded(f"{N} steps requested, cap is {limit}")
    sides = _sides(policy, N)
    steps, states = [], []
    cur = T
    for k, side in enumerate(sides, 1):
        st, cur = step(cur, side, k)
        steps.append(st)
        states.append(cur)
    trace = InductionTrace(T, tuple(steps), tuple(states))
    B = trace.product()
    if matvec(B, cur.lengths) != T.lengths:
        raise AssertionError("lambda != B lambda^(N)")
    if matmul(matmul(transpose(B), l_matrix(T.pi)), B) != l_matrix(cur.pi):
        raise AssertionError("B^T L_pi B != L_pi^(N)")
    return trace


@dataclass(frozen=True)
class GroupedProducts:
    cuts: tuple[int, ...]
    products: tuple

    def __iter__(self):
        return iter(self.products)

    def __len__(self):
        return len(self.products)


def group_products(trace: InductionTrace | Sequence[Matrix], cuts: Sequence[int]) -> GroupedProducts:
    """``B_l = A_{k_{l-1}+1} ... A_{k_l}`` for cuts ``k_1 < k_2 < ...`` (``k_0 = 0``)."""
    mats = trace.matrices if isinstance(trace, InductionTrace) else list(trace)
    cuts = tuple(int(c) for c in cuts)
    prev = 0
    for c in cuts:
        if c <= prev:
            raise ValueError(f"cuts must be strictly increasing and positive: {cuts}")
        prev = c
    if cuts and cuts[-1] > len(mats):
        raise ValueError(f"last cut {cuts[-1]} exceeds trace length {len(mats)}")
    products, prev = [], 0
    for c in cuts:
        products.append(product(mats[prev:c]))
        prev = c
    return GroupedProducts(cuts, tuple(products))


def first_positive_window(trace: InductionTrace | Sequence[Matrix], j: int) -> int | None:
    """Least ``k >= j`` with ``A_j ... A_k`` entrywise positive, or ``None``."""
    mats = trace.matrices if isinstance(trace, InductionTrace) else list(trace)
    if j < 1:
        raise ValueError("windows are 1-based")
    acc = None
    for k in range(j, len(mats) + 1):
        A = mats[k - 1]
        acc = A if acc is None else matmul(acc, A)
        if is_positive(acc):
            return k
    return None


def is_unimodular(M: Matrix) -> bool:
    return determinant(M) in (1, -1)
