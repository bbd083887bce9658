from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from rauzy_lab.exact import (
    ContextError,
    NotUnimodular,
    Ordering,
    QuadraticNumber,
    bilinear,
    decode_matrix,
    decode_scalar,
    determinant,
    encode_matrix,
    encode_scalar,
    identity,
    kernel,
    matmul,
    matvec,
    nullspace,
    rank,
    scalar_cmp,
    sqrt,
    squarefree_part,
    unimodular_inverse,
)

from conftest import fractions, quadratics

small_ints = st.integers(-4, 4)


def int_matrices(rows=st.integers(1, 5), cols=st.integers(1, 5)):
    return st.tuples(rows, cols).flatmap(
        lambda rc: st.lists(st.lists(small_ints, min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0])
    ).map(lambda m: tuple(tuple(r) for r in m))


def antisymmetric(n):
    def build(vals):
        M = [[0] * n for _ in range(n)]
        it = iter(vals)
        for i in range(n):
            for j in range(i + 1, n):
                v = next(it)
                M[i][j], M[j][i] = v, -v
        return tuple(tuple(r) for r in M)
    return st.lists(small_ints, min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2).map(build)


# -- scalar_cmp -------------------------------------------------------------

def test_cmp_rationals():
    assert scalar_cmp(Fraction(1, 2), Fraction(1, 3)) is Ordering.GREATER


def test_cmp_sqrt5_vs_nine_quarters():
    # oracle: sqrt5 < 9/4  <=>  5 * 16 < 81
    assert 5 * 16 < 9 * 9
    assert scalar_cmp(QuadraticNumber(0, 1, 5), Fraction(9, 4)) is Ordering.LESS


def test_cmp_reflexive():
    x = QuadraticNumber(Fraction(-3, 7), Fraction(2, 5), 5)
    assert scalar_cmp(x, x) is Ordering.EQUAL


def test_cmp_mismatched_fields():
    with pytest.raises(ContextError):
        scalar_cmp(sqrt(5), sqrt(2))
    with pytest.raises(ContextError):
        _ = sqrt(5) + sqrt(2)


def test_float_rejected():
    with pytest.raises(TypeError):
        scalar_cmp(0.5, Fraction(1, 2))


@given(quadratics(), quadratics(), quadratics())
def test_cmp_transitive_and_consistent(x, y, z):
    assert scalar_cmp(x, y) == -scalar_cmp(y, x)
    assert scalar_cmp(x, y) == scalar_cmp(x - y, 0)
    if scalar_cmp(x, y) <= 0 and scalar_cmp(y, z) <= 0:
        assert scalar_cmp(x, z) <= 0


@given(quadratics())
def test_cmp_matches_high_precision(x):
    # independent oracle: 60-digit evaluation of a + b sqrt 5
    v = sympy.Rational(x.a.numerator, x.a.denominator) + sympy.Rational(x.b.numerator, x.b.denominator) * sympy.sqrt(5)
    expected = 0 if v == 0 else (1 if v.evalf(60) > 0 else -1)
    assert scalar_cmp(x, 0) == expected


@given(fractions, fractions)
def test_rational_promotion(p, q):
    x = QuadraticNumber(p, q, 5)
    assert x + p - p == x
    assert (x * 2) / 2 == x
    if q == 0:
        assert x == p and hash(x) == hash(p)


@given(quadratics(), quadratics())
def test_field_axioms(x, y):
    assert x + y == y + x
    assert x * y == y * x
    if x != 0:
        assert (y / x) * x == y
        assert x * x.conjugate() == x.norm()


def test_sqrt_reduces_to_squarefree():
    assert squarefree_part(12) == (2, 3)
    assert sqrt(12) == 2 * sqrt(3)
    with pytest.raises(ValueError):
        sqrt(9)


# -- nullspace / rank ------------------------------------------------------

def test_nullspace_examples():
    assert nullspace(((0, 1), (-1, 0))) == []
    assert len(nullspace(((0, 0), (0, 0)))) == 2
    (v,) = nullspace(((0, 1, 1), (-1, 0, 1), (-1, -1, 0)))
    # oracle: sympy's nullspace of the same matrix
    (w,) = sympy.Matrix([[0, 1, 1], [-1, 0, 1], [-1, -1, 0]]).nullspace()
    ratio = Fraction(int(v[0])) / Fraction(str(w[0]))
    assert [Fraction(x) for x in v] == [ratio * Fraction(str(c)) for c in w]
    assert [x / v[0] for x in v] == [1, -1, 1]


@given(int_matrices())
def test_nullspace_against_sympy(M):
    ns = nullspace(M)
    cols = len(M[0])
    for v in ns:
        assert not any(matvec(M, v))
    assert len(ns) + rank(M) == cols
    assert rank(M) == sympy.Matrix(M).rank()
    assert len(ns) == len(sympy.Matrix(M).nullspace())


@given(int_matrices())
def test_kernel_agrees_with_nullspace(M):
    assert len(kernel(M)) == len(nullspace(M))
    assert rank(tuple(nullspace(M)) or ((0,) * len(M[0]),)) == len(nullspace(M))


def test_kernel_over_quadratic_field():
    phi = (1 + sqrt(5)) / 2
    B = ((1, 1), (1, 2))
    alpha = phi * phi
    (v,) = kernel(((1 - alpha, 1), (1, 2 - alpha)))
    assert matvec(B, v) == tuple(alpha * x for x in v)


# -- bilinear ----------------------------------------------------------------

def test_bilinear_example():
    assert bilinear((1, 0), ((0, 1), (-1, 0)), (0, 1)) == 1


def test_bilinear_requires_antisymmetry():
    with pytest.raises(ValueError):
        bilinear((1, 0), ((1, 0), (0, 1)), (0, 1))


@given(st.integers(2, 5).flatmap(lambda n: st.tuples(antisymmetric(n), st.lists(fractions, min_size=n, max_size=n),
                                                     st.lists(fractions, min_size=n, max_size=n))))
def test_bilinear_antisymmetric(data):
    L, u, v = data
    assert bilinear(u, L, u) == 0
    assert bilinear(u, L, v) + bilinear(v, L, u) == 0


# -- unimodular inverse -----------------------------------------------------

def test_unimodular_examples():
    assert unimodular_inverse(identity(3)) == identity(3)
    assert unimodular_inverse(((1, 1), (0, 1))) == ((1, -1), (0, 1))
    with pytest.raises(NotUnimodular):
        unimodular_inverse(((2, 0), (0, 1)))


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), small_ints), min_size=0, max_size=12),
       st.integers(2, 5))
def test_unimodular_roundtrip(ops, n):
    # random products of elementary integer matrices are unimodular
    A = [list(r) for r in identity(n)]
    for i, j, c in ops:
        i, j = i % n, j % n
        if i != j:
            A[i] = [a + c * b for a, b in zip(A[i], A[j])]
    A = tuple(tuple(r) for r in A)
    inv = unimodular_inverse(A)
    assert matmul(A, inv) == identity(n)
    assert determinant(A) == int(sympy.Matrix(A).det()) == 1
    assert inv == tuple(tuple(int(x) for x in row) for row in sympy.Matrix(A).inv().tolist())


@given(int_matrices(rows=st.just(3), cols=st.just(3)))
def test_determinant_against_sympy(M):
    assert determinant(M) == sympy.Matrix(M).det()


# -- JSON ---------------------------------------------------------------------

def test_scalar_encoding():
    assert encode_scalar(Fraction(-2, 4)) == "-1/2"
    assert encode_scalar(QuadraticNumber(Fraction(1, 2), Fraction(1, 2), 5)) == {"a": "1/2", "b": "1/2", "D": 5}
    assert decode_scalar({"a": "1/2", "b": "1/2", "D": 5}) == (1 + sqrt(5)) / 2


@given(st.one_of(fractions, quadratics()))
def test_scalar_roundtrip(x):
    assert decode_scalar(encode_scalar(x)) == x


def test_matrix_roundtrip():
    M = ((1, -1), (0, 1))
    obj = encode_matrix(M)
    assert obj == {"rows": 2, "cols": 2, "entries": [["1", "-1"], ["0", "1"]]}
    assert decode_matrix(obj, integer=True) == M
    with pytest.raises(ValueError):
        decode_matrix({"rows": 3, "cols": 2, "entries": [["1", "0"], ["0", "1"]]})
