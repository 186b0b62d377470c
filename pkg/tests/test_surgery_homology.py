from functools import reduce
from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, strategies as st

from anosov_kit.errors import ZeroSlope
from anosov_kit.exact_core import IntMatrix2
from anosov_kit.sol_symmetry import enumerate_symmetries, quotient_group, standard_symmetry
from anosov_kit.surgery_homology import (
    PUNCTURE_WORD,
    AbelianGroup,
    CurveClass,
    abelianize,
    cokernel,
    exterior_class,
    extends_to_filling,
    h1_filling,
    h1_mapping_torus,
    longitude_class_in_exterior,
    slope_image,
)
from anosov_kit.toral_dynamics import CAT_MAP

A = CAT_MAP


def det3(m):
    (a, b, c), (d, e, f), (g, h, i) = m
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def determinantal_orders(m):
    """Torsion and rank of Z^3 / rows(m) from gcds of minors (3x3 integer matrix)."""
    g1 = reduce(gcd, (x for row in m for x in row))
    minors2 = [
        m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]
        for r0, r1 in combinations(range(3), 2)
        for c0, c1 in combinations(range(3), 2)
    ]
    g2 = reduce(gcd, minors2)
    g3 = abs(det3(m))
    divs = [g1, g2, g3]
    factors = []
    prev = 1
    for d in divs:
        factors.append(0 if d == 0 else d // prev)
        prev = d or prev
    return factors


def filling_oracle(k):
    # Generators a, b (fiber) and t (meridian); rows: (A - I) relations, then l + k m = k t.
    M = A - IntMatrix2.identity()
    rows = [[M.a, M.c, 0], [M.b, M.d, 0], [0, 0, k]]
    return AbelianGroup.from_cyclic_orders(determinantal_orders(rows))


def test_puncture_word_is_null_homologous():
    assert abelianize(PUNCTURE_WORD) == (0, 0)
    assert abelianize("aab") == (2, 1)


def test_h1_w_and_n():
    assert h1_mapping_torus(A) == AbelianGroup(1)
    assert str(h1_mapping_torus(A)) == "Z"
    v = longitude_class_in_exterior(A)
    assert v.value == 0 and v.group == AbelianGroup(1)
    assert exterior_class(CurveClass(0, 1), A).value == 1
    assert len(v.trace) >= 3


def test_h1_of_other_torus_bundles():
    assert h1_mapping_torus(IntMatrix2(3, 2, 1, 1)) == AbelianGroup(1, (2,))
    assert h1_mapping_torus(IntMatrix2.identity()) == AbelianGroup(3)
    assert h1_mapping_torus(IntMatrix2(-1, 0, 0, -1)) == AbelianGroup(1, (2, 2))


@pytest.mark.parametrize("k", [k for k in range(-50, 51) if k])
def test_filling_is_cyclic_of_order_k(k):
    h1 = h1_filling(k, A)
    assert h1.rank == 0
    assert h1.order == abs(k)
    assert h1 == filling_oracle(k)


def test_zero_filling_is_z():
    assert h1_filling(0, A) == AbelianGroup(1)


def test_abelian_group_normal_form():
    assert AbelianGroup.from_cyclic_orders([2, 3]) == AbelianGroup(0, (6,))
    assert AbelianGroup.from_cyclic_orders([4, 6, 0, 1]) == AbelianGroup(1, (2, 12))
    with pytest.raises(ValueError):
        AbelianGroup(0, (4, 6))
    g = AbelianGroup(1, (2, 4))
    assert AbelianGroup.from_json(g.to_json()) == g
    assert cokernel(IntMatrix2(2, 0, 0, 3)) == AbelianGroup(0, (6,))


@given(st.lists(st.integers(0, 40), max_size=5))
def test_cyclic_normal_form_preserves_order(orders):
    g = AbelianGroup.from_cyclic_orders(orders)
    finite = [n for n in orders if n > 1]
    expected = 1
    for n in finite:
        expected *= n
    assert g.rank == orders.count(0)
    if g.rank == 0:
        assert g.order == expected


@pytest.mark.parametrize("k", [k for k in range(-12, 13) if k])
def test_slope_census(k):
    G = quotient_group(enumerate_symmetries(A, 3), A)
    ok = [el for el in G.elements if extends_to_filling(el.representative, k)]
    assert len(ok) == 4
    assert all(el.orientation_sign == 1 for el in ok)
    assert slope_image(standard_symmetry("g4"), k) == CurveClass(1, -k)
    assert not extends_to_filling(standard_symmetry("g4"), k)


def test_slope_images():
    assert slope_image(standard_symmetry("g1"), 5) == CurveClass(-1, -5)
    assert slope_image(standard_symmetry("g2"), 5) == CurveClass(1, 5)
    assert CurveClass(1, 5).is_slope() and not CurveClass(2, 4).is_slope()


def test_zero_slope_raises():
    with pytest.raises(ZeroSlope):
        extends_to_filling(standard_symmetry("g1"), 0)
