from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from anosov_kit.errors import Degenerate, NotPeriodic
from anosov_kit.exact_core import IntMatrix2, RationalVec2
from anosov_kit.sol_symmetry import standard_symmetry
from anosov_kit.toral_dynamics import (
    CAT_MAP,
    FreeHomotopyClass,
    PeriodicOrbit,
    apply_symmetry,
    brute_force_fixed_points,
    conjugacy_search,
    enumerate_orbits,
    fixed_point_count,
    freely_homotopic,
    holonomy_class,
    orbit_of,
    parse_point,
    periodic_points,
)

A = CAT_MAP
BETA1 = [("1/4", "0"), ("1/2", "1/4"), ("1/4", "3/4")]
BETA2 = [("3/4", "0"), ("1/2", "3/4"), ("3/4", "1/4")]


def lucas(n: int) -> int:
    a, b = 2, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def pts(raw):
    return tuple(RationalVec2(x, y) for x, y in raw)


def oracle_homotopic(v1, v2, n):
    # Integrality of (A^n - I)^-1 (A^m v1 - v2) via the adjugate; no SNF.
    M = A**n - IntMatrix2.identity()
    det, adj = M.det(), M.adjugate()
    for m in range(n):
        w = (A**m) @ v1
        diff = (w[0] - v2[0], w[1] - v2[1])
        u = adj @ diff
        if u[0] % det == 0 and u[1] % det == 0:
            return True
    return False


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_fixed_point_counts_three_ways(n):
    count = fixed_point_count(A, n)
    assert count == [1, 5, 16, 45, 121][n - 1]
    assert count == lucas(2 * n) - 2
    assert len(periodic_points(A, n)) == count
    assert periodic_points(A, n) == sorted(brute_force_fixed_points(A, n), key=RationalVec2.as_tuple)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_periodic_points_are_fixed(n):
    An = A**n
    for p in periodic_points(A, n):
        assert (An @ p - p).is_integral()


def test_degenerate_count():
    with pytest.raises(Degenerate):
        fixed_point_count(IntMatrix2(1, 1, 0, 1), 1)


def test_beta_orbits_verbatim():
    b1 = orbit_of(A, parse_point("1/4,0"))
    b2 = orbit_of(A, parse_point("3/4,0"))
    assert b1.points == pts(BETA1)
    assert b2.points == pts(BETA2)
    assert holonomy_class(A, b1).holonomy == (3, 2)
    assert holonomy_class(A, b2).holonomy == (9, 6)
    assert holonomy_class(A, b1).winding == 3


def test_period_three_census():
    orbits = enumerate_orbits(A, 3)
    assert len(orbits) == 5
    assert {o.point_set() for o in orbits} >= {frozenset(pts(BETA1)), frozenset(pts(BETA2))}
    assert sum(o.period for o in orbits) + 1 == 16


def test_g2_swaps_betas():
    g2 = standard_symmetry("g2", A)
    b1, b2 = orbit_of(A, pts(BETA1)[0]), orbit_of(A, pts(BETA2)[0])
    assert apply_symmetry(g2, b1) == b2
    assert apply_symmetry(g2, b2) == b1


def test_betas_not_freely_homotopic_with_full_search():
    b1, b2 = orbit_of(A, pts(BETA1)[0]), orbit_of(A, pts(BETA2)[0])
    search = conjugacy_search(A, holonomy_class(A, b1), holonomy_class(A, b2))
    assert search.homotopic is False
    assert [a["m"] for a in search.attempts] == [0, 1, 2]
    assert all(a["solution"] is None for a in search.attempts)
    assert search.invariant_factors == (4, 4)
    assert search.modulus == IntMatrix2(12, 8, 8, 4)


def test_orbit_equality_is_cyclic():
    b1 = orbit_of(A, pts(BETA1)[0])
    rotated = orbit_of(A, pts(BETA1)[1])
    assert rotated == b1 and hash(rotated) == hash(b1)
    assert b1.reversed() != b1
    assert PeriodicOrbit.from_json(b1.to_json()) == b1


def test_orbit_of_rejects_floats():
    with pytest.raises(NotPeriodic):
        orbit_of(A, (0.25, 0.0))


def test_non_invertible_orbit_may_not_return():
    with pytest.raises(NotPeriodic):
        orbit_of(IntMatrix2(2, 0, 0, 2), RationalVec2("1/4", 0))


def test_winding_mismatch_short_circuits():
    c1 = FreeHomotopyClass((0, 0), 1)
    c2 = FreeHomotopyClass((0, 0), 2)
    assert not freely_homotopic(A, c1, c2)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_distinct_orbits_never_homotopic(n):
    orbits = enumerate_orbits(A, n)
    classes = [holonomy_class(A, o) for o in orbits]
    for c in classes:
        assert freely_homotopic(A, c, c)
    for c1, c2 in combinations(classes, 2):
        assert not freely_homotopic(A, c1, c2)
        assert not oracle_homotopic(c1.holonomy, c2.holonomy, n)


@st.composite
def orbit_and_shift(draw):
    n = draw(st.integers(1, 4))
    orbits = enumerate_orbits(A, n)
    orbit = draw(st.sampled_from(orbits))
    j = draw(st.integers(0, orbit.period - 1))
    return orbit, j


@settings(max_examples=60)
@given(orbit_and_shift())
def test_basepoint_change_preserves_class(data):
    orbit, j = data
    moved = orbit_of(A, orbit.points[j])
    c1, c2 = holonomy_class(A, orbit), holonomy_class(A, moved)
    assert freely_homotopic(A, c1, c2)
    assert oracle_homotopic(c1.holonomy, c2.holonomy, orbit.period)


@given(st.integers(-40, 40), st.integers(-40, 40), st.integers(-40, 40), st.integers(-40, 40), st.integers(1, 4))
def test_search_agrees_with_adjugate_oracle(a, b, c, d, n):
    c1, c2 = FreeHomotopyClass((a, b), n), FreeHomotopyClass((c, d), n)
    assert freely_homotopic(A, c1, c2) == oracle_homotopic((a, b), (c, d), n)
    assert freely_homotopic(A, c1, c2) == freely_homotopic(A, c2, c1)


@given(st.integers(1, 30), st.integers(0, 29), st.integers(0, 29))
def test_every_rational_point_is_periodic(q, i, j):
    p = RationalVec2(Fraction(i % q, q), Fraction(j % q, q))
    orbit = orbit_of(A, p)
    assert ((A ** orbit.period) @ p - p).is_integral()
