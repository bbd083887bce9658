"""First-return maps on sub-intervals and their natural decompositions."""

from __future__ import annotations

from dataclasses import dataclass

from . import _config
from .exact import Matrix, as_scalar, encode_matrix, encode_scalar, matvec
from .iet import IET, DomainError
from .permutations import Permutation

__all__ = [
    "ReturnOverflow",
    "NotAdmissible",
    "Piece",
    "NaturalDecomposition",
    "return_time",
    "return_word",
    "cut_points",
    "natural_decomposition",
    "is_admissible",
    "visitation_from_decomposition",
    "induced_iet",
]


class ReturnOverflow(RuntimeError):
    """An orbit did not come back within the iteration cap."""


class NotAdmissible(ValueError):
    pass


def _check_interval(T: IET, a, b):
    a, b = as_scalar(a), as_scalar(b)
    if not (a < b):
        raise ValueError(f"degenerate interval [{a}, {b})")
    if a < T.origin or b > T.end:
        raise DomainError(f"[{a}, {b}) is not inside [{T.origin}, {T.end})")
    return a, b


def return_word(T: IET, J: tuple, x, cap: int | None = None) -> tuple[int, ...]:
    """Interval indices visited by ``x, T x, ...`` before coming back to ``J``."""
    a, b = _check_interval(T, *J)
    if not (a <= x < b):
        raise DomainError(f"{x} is not in [{a}, {b})")
    limit = _config.cap(_config.RETURN_CAP if cap is None else cap)
    word = []
    y = x
    while True:
        j = T.interval_index(y)
        word.append(j)
        y = y + T.translations[j - 1]
        if a <= y < b:
            return tuple(word)
        if len(word) >= limit:
            raise ReturnOverflow(f"no return to [{a}, {b}) within {limit} steps")


def return_time(T: IET, J: tuple, x, cap: int | None = None) -> int:
    """Least ``k >= 1`` with ``T^k x`` in ``J``."""
    return len(return_word(T, J, x, cap))


def cut_points(T: IET, J: tuple, cap: int | None = None) -> list:
    """Left endpoints of the natural decomposition of ``J = [a, b)``.

    These are ``a`` together with the first backward entry into ``J`` of each
    of ``a``, ``b``, the left end of the domain and the interior breakpoints.
    """
    a, b = _check_interval(T, *J)
    limit = _config.cap(_config.RETURN_CAP if cap is None else cap)
    marks = {a}
    sources = [a, b, T.origin, *T.breakpoints[1:-1]]
    for z in sources:
        if z == T.end:
            # the right end of the domain is never crossed from inside
            continue
        w = z if z != a else T.inverse(z)
        steps = 0
        while not (a <= w < b):
            w = T.inverse(w)
            steps += 1
            if steps > limit:
                raise ReturnOverflow(f"backward orbit of {z} missed [{a}, {b}) for {limit} steps")
        marks.add(w)
    return sorted(marks)


@dataclass(frozen=True)
class Piece:
    a: object
    b: object
    word: tuple

    @property
    def r(self) -> int:
        return len(self.word)

    @property
    def length(self):
        return self.b - self.a

    def to_json(self) -> dict:
        return {"a": encode_scalar(self.a), "b": encode_scalar(self.b), "r": self.r, "word": list(self.word)}


@dataclass(frozen=True)
class NaturalDecomposition:
    interval: tuple
    n: int
    pieces: tuple

    @property
    def m(self) -> int:
        return len(self.pieces)

    @property
    def admissible(self) -> bool:
        return self.m == self.n

    @property
    def return_times(self) -> tuple[int, ...]:
        return tuple(p.r for p in self.pieces)

    def counting_matrix(self) -> Matrix:
        """``A_ij`` = visits of piece ``j`` to ``I_i`` before returning."""
        return tuple(
            tuple(p.word.count(i) for p in self.pieces) for i in range(1, self.n + 1)
        )

    def to_json(self, T: IET | None = None) -> dict:
        out = {"pieces": [p.to_json() for p in self.pieces], "admissible": self.admissible}
        out["A"] = encode_matrix(visitation_from_decomposition(T, self)) if (T is not None and self.admissible) else None
        return out


def natural_decomposition(T: IET, J: tuple, cap: int | None = None) -> NaturalDecomposition:
    a, b = _check_interval(T, *J)
    marks = cut_points(T, (a, b), cap)
    ends = marks[1:] + [b]
    pieces: list[Piece] = []
    for lo, hi in zip(marks, ends):
        word = return_word(T, (a, b), lo, cap)
        if pieces and pieces[-1].word == word:
            pieces[-1] = Piece(pieces[-1].a, hi, word)
        else:
            pieces.append(Piece(lo, hi, word))
    return NaturalDecomposition((a, b), T.n, tuple(pieces))


def is_admissible(T: IET, J: tuple, cap: int | None = None) -> tuple[bool, NaturalDecomposition]:
    dec = natural_decomposition(T, J, cap)
    return dec.admissible, dec


def _decomposition(T: IET, J, cap):
    return J if isinstance(J, NaturalDecomposition) else natural_decomposition(T, J, cap)


def visitation_from_decomposition(T: IET, J, cap: int | None = None) -> Matrix:
    """Counting visitation matrix of an admissible ``J``; checks ``lambda = A lambda'``."""
    dec = _decomposition(T, J, cap)
    if not dec.admissible:
        raise NotAdmissible(f"{dec.m} pieces for n = {dec.n}")
    A = dec.counting_matrix()
    if matvec(A, tuple(p.length for p in dec.pieces)) != T.lengths:
        raise AssertionError("lambda != A lambda'")
    return A


def induced_iet(T: IET, J, keep_origin: bool = False, cap: int | None = None) -> IET:
    """``T`` induced on an admissible ``J``, moved to start at 0 unless ``keep_origin``."""
    dec = _decomposition(T, J, cap)
    if not dec.admissible:
        raise NotAdmissible(f"{dec.m} pieces for n = {dec.n}")
    targets = []
    for p in dec.pieces:
        y = p.a
        for j in p.word:
            y = y + T.translations[j - 1]
        targets.append(y)
    order = sorted(range(dec.m), key=lambda i: targets[i])
    image = [0] * dec.m
    for pos, i in enumerate(order, 1):
        image[i] = pos
    lengths = tuple(p.length for p in dec.pieces)
    origin = dec.interval[0] if keep_origin else 0
    S = IET(Permutation(tuple(image)), lengths, origin)
    if keep_origin:
        for p, y in zip(dec.pieces, targets):
            if S(p.a) != y:
                raise AssertionError("induced map disagrees with the first return")
    return S
