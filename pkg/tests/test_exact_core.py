from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from anosov_kit.errors import NonInvertible
from anosov_kit.exact_core import (
    IntMatrix2,
    RationalVec2,
    conjugate,
    format_rational,
    parse_rational,
    smith_normal_form,
)

ints = st.integers(min_value=-60, max_value=60)
matrices = st.builds(IntMatrix2, ints, ints, ints, ints)
rationals = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 100)


def oracle_invariant_factors(m: IntMatrix2) -> tuple[int, int]:
    # d1 = gcd of the entries, d1 * d2 = |det|: the 2x2 determinantal divisors.
    d1 = gcd(gcd(m.a, m.b), gcd(m.c, m.d))
    if d1 == 0:
        return (0, 0)
    return (d1, abs(m.det()) // d1)


def test_parse_rational_is_exact():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational(" -2 ") == -2
    assert parse_rational("0.25") == Fraction(1, 4)
    assert parse_rational(Fraction(5, 10)) == Fraction(1, 2)


@pytest.mark.parametrize("bad", [0.5, True, None, [1, 2]])
def test_parse_rational_refuses_inexact(bad):
    with pytest.raises(TypeError):
        parse_rational(bad)


def test_format_always_writes_denominator():
    assert format_rational(Fraction(0)) == "0/1"
    assert format_rational(Fraction(-6, 4)) == "-3/2"


@given(rationals, rationals)
def test_vector_json_round_trip(x, y):
    v = RationalVec2(x, y)
    assert RationalVec2.from_json(v.to_json()) == v
    r = v.mod1()
    assert 0 <= r.x < 1 and 0 <= r.y < 1
    assert (v - r).is_integral()


def test_matrix_basics():
    A = IntMatrix2(2, 1, 1, 1)
    assert A.det() == 1 and A.trace() == 3
    assert A @ A.inverse() == IntMatrix2.identity()
    assert A**-2 == (A**2).inverse()
    assert A**0 == IntMatrix2.identity()
    assert A @ (1, 0) == (2, 1)
    assert A @ RationalVec2("1/4", 0) == RationalVec2("1/2", "1/4")
    assert IntMatrix2.from_json(A.to_json()) == A


def test_non_unimodular_inverse_raises():
    with pytest.raises(NonInvertible):
        IntMatrix2(2, 0, 0, 1).inverse()


def test_matrix_refuses_fractional_entries():
    with pytest.raises(TypeError):
        IntMatrix2(Fraction(1, 2), 0, 0, 1)


def test_conjugate_of_cat_map():
    A = IntMatrix2(2, 1, 1, 1)
    assert conjugate(IntMatrix2(-1, 0, 1, 1), A) == A.inverse()
    assert conjugate(IntMatrix2(0, 1, -1, 0), A) == A.inverse()
    assert conjugate(IntMatrix2(-1, 0, 0, -1), A) == A


@pytest.mark.parametrize(
    "rows, factors",
    [
        (((1, 1), (1, 0)), (1, 1)),
        (((12, 8), (8, 4)), (4, 4)),
        (((2, 0), (0, 3)), (1, 6)),
        (((0, 0), (0, 0)), (0, 0)),
        (((4, 6), (6, 9)), (1, 0)),
    ],
)
def test_snf_known_cases(rows, factors):
    snf = smith_normal_form(IntMatrix2.from_rows(rows))
    assert snf.invariant_factors == factors
    assert snf.check()


@given(matrices)
def test_snf_transform_identity_and_oracle(m):
    snf = smith_normal_form(m)
    assert snf.U @ m @ snf.V == snf.D
    assert snf.U.is_unimodular() and snf.V.is_unimodular()
    d1, d2 = snf.invariant_factors
    assert snf.D == IntMatrix2(d1, 0, 0, d2)
    assert d1 >= 0 and d2 >= 0
    assert (d1 == 0 and d2 == 0) or d2 % d1 == 0
    assert snf.invariant_factors == oracle_invariant_factors(m)


@given(matrices, ints, ints)
def test_lattice_membership_matches_solve(m, x, y):
    snf = smith_normal_form(m)
    image = m @ (x, y)
    assert snf.in_column_lattice(image)
    sol = snf.solve(image)
    assert sol is not None and m @ sol == image
