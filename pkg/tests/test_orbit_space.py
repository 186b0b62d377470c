import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from anosov_kit.orbit_space import (
    STABLE,
    UNSTABLE,
    DeckModel,
    Leaf,
    StripPoint,
    as_strip_point,
    deck_fixed_orbits,
    demo_rows,
    eta,
    eta_closed_form,
    eta_geometric,
    eta_power,
    intersect,
    leaf_image,
    leaf_through,
    random_strip_point,
)


@st.composite
def strip_points(draw):
    x = draw(st.fractions(max_denominator=200).filter(lambda q: abs(q) < 1000))
    off = draw(st.fractions(min_value=Fraction(-199, 200), max_value=Fraction(199, 200), max_denominator=200))
    return StripPoint(x, x + off)


def test_examples():
    assert eta(as_strip_point(0, 0)) == StripPoint(1, 1)
    assert eta(as_strip_point("1/2", 0)) == StripPoint(1, "3/2")
    assert eta_power(StripPoint(0, 0), -1) == StripPoint(-1, -1)


def test_strip_bounds():
    with pytest.raises(ValueError):
        StripPoint(0, 1)
    with pytest.raises(TypeError):
        StripPoint(0.5, 0)


@given(strip_points())
def test_eta_geometry(p):
    q = eta(p)
    assert q == eta_geometric(p) == eta_closed_form(p)
    assert q != p
    # eta swaps leaf families and raises levels by one.
    assert leaf_through(q, UNSTABLE) == leaf_image(leaf_through(p, STABLE))
    assert leaf_through(q, STABLE) == leaf_image(leaf_through(p, UNSTABLE))
    # eta^2 is the translation by (1,1): eta is a square root of the deck shift.
    assert eta(q) == StripPoint(p.x + 2, p.y + 2)


@given(strip_points(), st.integers(-15, 15), st.integers(-15, 15))
def test_eta_power_is_a_group_action(p, i, j):
    assert eta_power(eta_power(p, i), j) == eta_power(p, i + j)


@given(strip_points())
def test_even_tower_distinct(p):
    tower = {eta_power(p, 2 * j) for j in range(-10, 11)}
    assert len(tower) == 21


def test_eta_on_many_random_points():
    rng = random.Random(7)
    for _ in range(2000):
        p = random_strip_point(rng)
        assert eta(p) == eta_geometric(p)


def test_leaf_intersection():
    p = intersect(Leaf(STABLE, "1/3"), Leaf(UNSTABLE, "1/2"))
    assert p == StripPoint("1/2", "1/3")
    with pytest.raises(ValueError):
        intersect(Leaf(STABLE, 0), Leaf(UNSTABLE, 3))
    with pytest.raises(ValueError):
        intersect(Leaf(STABLE, 0), Leaf(STABLE, 0))


@pytest.mark.parametrize("axis, amplitude", [(0, "1/4"), ("1/3", "3/10"), ("-2/7", "1/10")])
def test_deck_fixed_orbits_are_the_eta_orbit(axis, amplitude):
    D = DeckModel(axis, amplitude)
    found = deck_fixed_orbits(D, 5)
    base = StripPoint(axis, axis)
    assert [p for p, _ in found] == [eta_power(base, j) for j in range(-5, 6)]
    assert [label for _, label in found] == ["alpha" if j % 2 == 0 else "alpha^-1" for j in range(-5, 6)]


def test_deck_model_commutes_with_eta():
    D = DeckModel(0, "1/4")
    rng = random.Random(3)
    for _ in range(50):
        p = random_strip_point(rng, span=3, denominator=17)
        gx, gy = D.g(p)
        ex, ey = D.g(eta(p))
        assert abs(ex - (gy + 1)) < 1e-12 and abs(ey - (gx + 1)) < 1e-12


def test_deck_amplitude_bound():
    with pytest.raises(ValueError):
        DeckModel(0, "1/3")


def test_demo_rows_deterministic():
    assert demo_rows(5, 11) == demo_rows(5, 11)
    assert demo_rows(5, 11) != demo_rows(5, 12)
    row = demo_rows(1, 0)[0]
    p = StripPoint(row["x"], row["y"])
    assert eta(p) == StripPoint(row["eta_x"], row["eta_y"])
