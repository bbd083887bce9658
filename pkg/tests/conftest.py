import os
from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from rauzy_lab.exact import QuadraticNumber
from rauzy_lab.permutations import Permutation, is_irreducible

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=1000,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=30)
positive_fractions = st.fractions(min_value=Fraction(1, 30), max_value=20, max_denominator=30)


def quadratics(D=5):
    return st.builds(lambda a, b: QuadraticNumber(a, b, D), fractions, fractions)


@st.composite
def permutations(draw, min_n=2, max_n=6, irreducible=True):
    n = draw(st.integers(min_n, max_n))
    image = draw(st.permutations(range(1, n + 1)))
    p = Permutation(tuple(image))
    if irreducible:
        from hypothesis import assume
        assume(is_irreducible(p))
    return p


@st.composite
def positive_quadratic_lengths(draw, n, D=5):
    """``n`` positive elements of Q(sqrt D) with nonzero irrational parts."""
    out = []
    for _ in range(n):
        b = draw(st.fractions(min_value=Fraction(1, 20), max_value=5, max_denominator=20))
        b = b if draw(st.booleans()) else -b
        # shift a so the value is positive
        a = draw(st.fractions(min_value=0, max_value=10, max_denominator=20))
        x = QuadraticNumber(a, b, D)
        if not (x > 0):
            x = x + (-x).floor() + 1
        out.append(x)
    return tuple(out)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
