"""Exact scalars and small exact linear algebra.

Rationals are :class:`fractions.Fraction`.  Elements of a real quadratic
field Q(sqrt D) are :class:`QuadraticNumber`.  Matrices are plain tuples of
row tuples; everything here is immutable and float free.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from functools import reduce
from math import gcd, isqrt
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence, Union

__all__ = [
    "ContextError",
    "NotUnimodular",
    "Ordering",
    "QuadraticNumber",
    "Scalar",
    "as_scalar",
    "scalar_cmp",
    "sqrt",
    "sign",
    "squarefree_part",
    "Matrix",
    "identity",
    "zeros",
    "matmul",
    "matvec",
    "transpose",
    "is_integer_matrix",
    "is_antisymmetric",
    "nullspace",
    "rank",
    "determinant",
    "unimodular_inverse",
    "bilinear",
    "kernel",
    "encode_scalar",
    "decode_scalar",
    "encode_matrix",
    "decode_matrix",
]


class ContextError(ValueError):
    """Arithmetic between two different quadratic fields."""


class NotUnimodular(ValueError):
    """Integer matrix whose determinant is not +1 or -1."""


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def squarefree_part(D: int) -> tuple[int, int]:
    """Return ``(k, d)`` with ``D == k*k*d`` and ``d`` squarefree."""
    if D <= 0:
        raise ValueError("D must be positive")
    k, d = 1, D
    p = 2
    while p * p <= d:
        while d % (p * p) == 0:
            d //= p * p
            k *= p
        p += 1
    return k, d


def _sign_of(a: Fraction, b: Fraction, D: int) -> int:
    # sign of a + b*sqrt(D), decided by comparing a^2 with b^2 D
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    diff = a * a - b * b * D
    s = (diff > 0) - (diff < 0)
    return s if a > 0 else -s


class QuadraticNumber:
    """The real number ``a + b*sqrt(D)`` with rational ``a``, ``b``.

    ``D`` is a positive non-square integer.  Two numbers only combine when
    they share ``D``; rationals promote silently.
    """

    __slots__ = ("a", "b", "D")

    def __init__(self, a=0, b=0, D: int = 5):
        D = int(D)
        if D <= 0 or isqrt(D) ** 2 == D:
            raise ValueError(f"D={D} must be a positive non-square integer")
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))
        object.__setattr__(self, "D", D)

    def __setattr__(self, name, value):
        raise AttributeError("QuadraticNumber is immutable")

    # -- coercion ---------------------------------------------------------
    def _coerce(self, other) -> "QuadraticNumber | None":
        if isinstance(other, QuadraticNumber):
            if other.D != self.D:
                raise ContextError(f"sqrt({self.D}) and sqrt({other.D}) do not mix")
            return other
        if isinstance(other, (int, Fraction)) or isinstance(other, _RationalABC):
            return QuadraticNumber(Fraction(other), 0, self.D)
        return None

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticNumber(self.a + o.a, self.b + o.b, self.D)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.D)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticNumber(self.a - o.a, self.b - o.b, self.D)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticNumber(
            self.a * o.a + self.b * o.b * self.D, self.a * o.b + self.b * o.a, self.D
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticNumber":
        """Galois conjugate ``a - b*sqrt(D)``."""
        return QuadraticNumber(self.a, -self.b, self.D)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.D

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt D)")
        num = self * o.conjugate()
        return QuadraticNumber(num.a / n, num.b / n, self.D)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return QuadraticNumber(1, 0, self.D) / (self ** (-k))
        out = QuadraticNumber(1, 0, self.D)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- comparison -------------------------------------------------------
    def sign(self) -> int:
        return _sign_of(self.a, self.b, self.D)

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign()

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except ContextError:
            return False
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.D))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __float__(self):
        # only for the floating-point verification layer
        from math import sqrt as _fsqrt

        return float(self.a) + float(self.b) * _fsqrt(self.D)

    def is_rational(self) -> bool:
        return self.b == 0

    def floor(self) -> int:
        """Exact floor."""
        guess = int(float(self)) - 2
        while self >= guess + 1:
            guess += 1
        while self < guess:
            guess -= 1
        return guess

    def __repr__(self):
        return f"QuadraticNumber({self.a}, {self.b}, D={self.D})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        b = "" if abs(self.b) == 1 else f"{abs(self.b)}*"
        s = "-" if self.b < 0 else "+"
        return f"{self.a} {s} {b}sqrt({self.D})"


Scalar = Union[Fraction, QuadraticNumber]


def as_scalar(x) -> Scalar:
    """Coerce ints, Fractions, ``"p/q"`` strings or QuadraticNumbers."""
    if isinstance(x, QuadraticNumber):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not exact scalars")
    return Fraction(x)


def sqrt(D: int) -> QuadraticNumber:
    """``sqrt(D)`` as an exact element of Q(sqrt d), d the squarefree part of D."""
    k, d = squarefree_part(D)
    if d == 1:
        raise ValueError(f"{D} is a perfect square")
    return QuadraticNumber(0, k, d)


def sign(x: Scalar) -> int:
    if isinstance(x, QuadraticNumber):
        return x.sign()
    return (x > 0) - (x < 0)


def scalar_cmp(x: Scalar, y: Scalar) -> Ordering:
    """Exact three-way comparison; raises :class:`ContextError` on mixed fields."""
    x, y = as_scalar(x), as_scalar(y)
    if isinstance(x, QuadraticNumber):
        d = x - y
    elif isinstance(y, QuadraticNumber):
        d = -(y - x)
    else:
        d = Fraction(x) - Fraction(y)
    return Ordering(sign(d))


# ---------------------------------------------------------------------------
# matrices: tuples of row tuples
# ---------------------------------------------------------------------------

Matrix = tuple  # tuple[tuple[Scalar, ...], ...]


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int | None = None) -> Matrix:
    cols = rows if cols is None else cols
    return tuple((0,) * cols for _ in range(rows))


def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    M = tuple(tuple(r) for r in rows)
    if M and len({len(r) for r in M}) != 1:
        raise ValueError("ragged matrix")
    return M


def transpose(M: Matrix) -> Matrix:
    return tuple(zip(*M))


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if A and len(A[0]) != len(B):
        raise ValueError("dimension mismatch")
    Bt = tuple(zip(*B))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in Bt) for row in A)


def matvec(A: Matrix, v: Sequence) -> tuple:
    if A and len(A[0]) != len(v):
        raise ValueError("dimension mismatch")
    return tuple(sum(x * y for x, y in zip(row, v)) for row in A)


def is_integer_matrix(M: Matrix) -> bool:
    return all(type(x) is int or (isinstance(x, Fraction) and x.denominator == 1)
               for row in M for x in row)


def is_antisymmetric(M: Matrix) -> bool:
    n = len(M)
    return all(len(r) == n for r in M) and all(
        M[i][j] == -M[j][i] for i in range(n) for j in range(i, n)
    )


def _integer_rows(M: Matrix) -> list[list[int]]:
    rows = []
    for row in M:
        fr = [Fraction(x) for x in row]
        den = reduce(lambda a, b: a * b // gcd(a, b), (f.denominator for f in fr), 1)
        rows.append([int(f * den) for f in fr])
    return rows


def _echelon_integer(rows: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free reduced row echelon form; rows stay primitive integer vectors."""
    rows = [r[:] for r in rows]
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f, g = rows[i][c], p[c]
                new = [g * x - f * y for x, y in zip(rows[i], p)]
                h = reduce(gcd, new, 0)
                rows[i] = [x // h for x in new] if h > 1 else new
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def nullspace(M: Matrix) -> list[tuple[Fraction, ...]]:
    """Basis of ``{v : M v = 0}`` over Q, one vector per free column.

    Each basis vector has a 1 in its free column.  The zero matrix yields the
    standard basis.
    """
    if not M:
        return []
    ncols = len(M[0])
    rows, pivots = _echelon_integer(_integer_rows(M))
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(rows, pivots):
            v[pc] = Fraction(-row[f], row[pc])
        basis.append(tuple(v))
    return basis


def rank(M: Matrix) -> int:
    """Rank over Q by plain Gaussian elimination on Fractions."""
    A = [[Fraction(x) for x in row] for row in M]
    if not A:
        return 0
    r = 0
    for c in range(len(A[0])):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(r + 1, len(A)):
            if A[i][c] != 0:
                f = A[i][c] / A[r][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        r += 1
    return r


def kernel(M: Matrix) -> list[tuple]:
    """Kernel basis over whatever field the entries live in (Q or Q(sqrt D))."""
    A = [list(row) for row in M]
    if not A:
        return []
    ncols = len(A[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        A[r] = [x / p for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    basis = []
    for f in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -A[i][f]
        basis.append(tuple(v))
    return basis


def determinant(M: Matrix) -> Fraction:
    """Exact determinant (Bareiss for integer input)."""
    n = len(M)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in M):
        raise ValueError("determinant of a non-square matrix")
    A = _integer_rows(M)
    scale = Fraction(1)
    for row, orig in zip(A, M):
        nz = next((i for i, x in enumerate(orig) if x != 0), None)
        if nz is not None:
            scale *= Fraction(orig[nz]) / row[nz]
    sgn, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if sw is None:
                return Fraction(0)
            A[k], A[sw] = A[sw], A[k]
            sgn = -sgn
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sgn * A[n - 1][n - 1] * scale


def unimodular_inverse(A: Matrix) -> Matrix:
    """Integer inverse of an integer matrix with determinant +1 or -1."""
    if not is_integer_matrix(A):
        raise NotUnimodular("matrix has non-integer entries")
    n = len(A)
    d = determinant(A)
    if d not in (1, -1):
        raise NotUnimodular(f"determinant is {d}")
    # Gauss-Jordan on [A | I]; every pivot division is exact
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(A)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [x / p for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    inv = tuple(tuple(int(x) for x in row[n:]) for row in aug)
    assert matmul(A, inv) == identity(n)
    return inv


def bilinear(u: Sequence, L: Matrix, v: Sequence):
    """``u^T L v`` for an anti-symmetric ``L`` (real exact scalars)."""
    if not is_antisymmetric(L):
        raise ValueError("L must be anti-symmetric")
    if len(u) != len(L) or len(v) != len(L):
        raise ValueError("dimension mismatch")
    return sum(x * y for x, y in zip(u, matvec(L, v)))


# ---------------------------------------------------------------------------
# JSON encodings
# ---------------------------------------------------------------------------

def encode_scalar(x):
    """``"p/q"`` for rationals, ``{"a","b","D"}`` for quadratic numbers."""
    if isinstance(x, QuadraticNumber):
        return {"a": str(x.a), "b": str(x.b), "D": x.D}
    return str(Fraction(x))


def decode_scalar(obj) -> Scalar:
    if isinstance(obj, dict):
        q = QuadraticNumber(Fraction(obj["a"]), Fraction(obj["b"]), int(obj["D"]))
        return q
    if isinstance(obj, bool) or isinstance(obj, float):
        raise TypeError(f"not an exact scalar: {obj!r}")
    return Fraction(obj)


def encode_matrix(M: Matrix) -> dict:
    rows = len(M)
    cols = len(M[0]) if rows else 0
    return {"rows": rows, "cols": cols, "entries": [[encode_scalar(x) for x in row] for row in M]}


def decode_matrix(obj, integer: bool = False) -> Matrix:
    entries = obj["entries"] if isinstance(obj, dict) else obj
    M = tuple(tuple(decode_scalar(x) for x in row) for row in entries)
    if isinstance(obj, dict):
        if len(M) != obj["rows"] or any(len(r) != obj["cols"] for r in M):
            raise ValueError("matrix dimensions do not match 'rows'/'cols'")
    if M and len({len(r) for r in M}) != 1:
        raise ValueError("ragged matrix")
    if integer:
        if not is_integer_matrix(M):
            raise ValueError("expected an integer matrix")
        M = tuple(tuple(int(x) for x in row) for row in M)
    return M
