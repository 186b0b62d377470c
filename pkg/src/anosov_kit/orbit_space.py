"""Strip model of a skew R-covered orbit space.

The orbit space is O = {(x, y) : |x - y| < 1}; stable leaves are horizontal
segments and unstable leaves vertical ones.  The half-step-up map eta is
built from leaves exactly as its geometric definition reads, and checked
against the closed form (x, y) -> (y + 1, x + 1).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .exact_core import RationalLike, format_rational, parse_rational

STABLE = "stable"
UNSTABLE = "unstable"
FIXED_POINT_TOL = 1e-9


@dataclass(frozen=True)
class StripPoint:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", parse_rational(self.x))
        object.__setattr__(self, "y", parse_rational(self.y))
        if abs(self.x - self.y) >= 1:
            raise ValueError(f"({self.x}, {self.y}) lies outside the strip |x - y| < 1")

    def to_json(self) -> list[str]:
        return [format_rational(self.x), format_rational(self.y)]


@dataclass(frozen=True)
class Leaf:
    """Stable leaf at level c is {(x, c) : c-1 < x < c+1}; unstable is the transpose."""

    kind: str
    level: Fraction

    def __post_init__(self):
        if self.kind not in (STABLE, UNSTABLE):
            raise ValueError(f"unknown leaf kind {self.kind!r}")
        object.__setattr__(self, "level", parse_rational(self.level))

    @property
    def endpoints(self) -> tuple[Fraction, Fraction]:
        return (self.level - 1, self.level + 1)

    def contains(self, p: StripPoint) -> bool:
        lo, hi = self.endpoints
        if self.kind == STABLE:
            return p.y == self.level and lo < p.x < hi
        return p.x == self.level and lo < p.y < hi

    def transverse_levels(self) -> tuple[Fraction, Fraction]:
        """Open interval of levels of the other family that cross this leaf."""
        return self.endpoints


def leaf_through(p: StripPoint, kind: str) -> Leaf:
    return Leaf(kind, p.y if kind == STABLE else p.x)


def intersect(a: Leaf, b: Leaf) -> StripPoint:
    if a.kind == b.kind:
        raise ValueError("leaves of the same family do not cross")
    s, u = (a, b) if a.kind == STABLE else (b, a)
    p = StripPoint(u.level, s.level)
    if not (s.contains(p) and u.contains(p)):
        raise ValueError("leaves do not meet inside the strip")
    return p


def eta_geometric(p: StripPoint) -> StripPoint:
    # Stable leaves crossing the unstable leaf through p form a strip; its
    # upper boundary is l_s.  Symmetrically for l_u.
    _, top_s = leaf_through(p, UNSTABLE).transverse_levels()
    _, top_u = leaf_through(p, STABLE).transverse_levels()
    l_s = Leaf(STABLE, top_s)
    l_u = Leaf(UNSTABLE, top_u)
    return intersect(l_s, l_u)


def eta_closed_form(p: StripPoint) -> StripPoint:
    return StripPoint(p.y + 1, p.x + 1)


def eta(p: StripPoint) -> StripPoint:
    q = eta_closed_form(p)
    assert q == eta_geometric(p), f"closed form disagrees with leaf construction at {p}"
    assert q != p
    return q


def eta_power(p: StripPoint, j: int) -> StripPoint:
    """eta^j for any integer j; eta^-1 (x, y) = (y - 1, x - 1)."""
    if j % 2 == 0:
        return StripPoint(p.x + j, p.y + j)
    return StripPoint(p.y + j, p.x + j)


def leaf_image(leaf: Leaf) -> Leaf:
    """eta of a whole leaf: families swap and the level moves up by one."""
    other = UNSTABLE if leaf.kind == STABLE else STABLE
    return Leaf(other, leaf.level + 1)


def random_strip_point(rng: random.Random, span: int = 50, denominator: int = 997) -> StripPoint:
    x = Fraction(rng.randint(-span * denominator, span * denominator), denominator)
    offset = Fraction(rng.randint(-denominator + 1, denominator - 1), denominator)
    return StripPoint(x, x + offset)


@dataclass(frozen=True)
class DeckModel:
    """Toy deck map g(x, y) = (f(x), f(y)) with f(x) = x + c sin^2(pi (x - x0)).

    For 0 < c < 1/pi, f is an increasing lift of a circle map of degree one
    whose fixed set is x0 + Z, so g commutes with eta and fixes exactly the
    diagonal points eta^j(x0, x0).
    """

    axis: Fraction
    amplitude: Fraction

    def __post_init__(self):
        object.__setattr__(self, "axis", parse_rational(self.axis))
        object.__setattr__(self, "amplitude", parse_rational(self.amplitude))
        if not (0 < self.amplitude and float(self.amplitude) * math.pi < 1):
            raise ValueError("amplitude must satisfy 0 < c < 1/pi")

    def f(self, x) -> mpmath.mpf:
        x = mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpmath.mpf(x)
        c = mpmath.mpf(self.amplitude.numerator) / self.amplitude.denominator
        x0 = mpmath.mpf(self.axis.numerator) / self.axis.denominator
        return x + c * mpmath.sin(mpmath.pi * (x - x0)) ** 2

    def displacement_slope(self, x) -> mpmath.mpf:
        """d/dx (f(x) - x) = c pi sin(2 pi (x - x0))."""
        c = mpmath.mpf(self.amplitude.numerator) / self.amplitude.denominator
        x0 = mpmath.mpf(self.axis.numerator) / self.axis.denominator
        return c * mpmath.pi * mpmath.sin(2 * mpmath.pi * (x - x0))

    def g(self, p: StripPoint) -> tuple[mpmath.mpf, mpmath.mpf]:
        return (self.f(p.x), self.f(p.y))


def _fixed_points_1d(D: DeckModel, lo: Fraction, hi: Fraction) -> list[Fraction]:
    """Zeros of f(x) - x in [lo, hi], located numerically and snapped to x0 + Z.

    The zeros are double (sin^2), so they are found as minima of the
    displacement: sign changes - to + of its derivative on a grid, refined
    by bisection, then accepted when |f(x) - x| < FIXED_POINT_TOL.
    """
    found = []
    with mpmath.workdps(40):
        step = mpmath.mpf(1) / 8
        # Irrational grid offset so no node lands on a critical point.
        x = mpmath.mpf(lo.numerator) / lo.denominator - mpmath.sqrt(2) / 97
        end = mpmath.mpf(hi.numerator) / hi.denominator + step
        prev = D.displacement_slope(x)
        while x < end:
            nxt_x = x + step
            nxt = D.displacement_slope(nxt_x)
            if prev < 0 <= nxt:
                root = mpmath.findroot(D.displacement_slope, (x, nxt_x), solver="bisect", tol=mpmath.mpf(10) ** -30)
                if abs(D.f(root) - root) < FIXED_POINT_TOL:
                    j = int(mpmath.nint(root - D.axis.numerator / mpmath.mpf(D.axis.denominator)))
                    cand = D.axis + j
                    if abs(root - mpmath.mpf(cand.numerator) / cand.denominator) < FIXED_POINT_TOL and lo <= cand <= hi:
                        found.append(cand)
            x, prev = nxt_x, nxt
    return sorted(set(found))


def deck_fixed_orbits(D: DeckModel, window: int) -> list[tuple[StripPoint, str]]:
    """Fixed points of g with |j| <= window, labelled by the parity of j.

    Even j: the orbit is freely homotopic to alpha; odd j: to alpha^-1.
    Each point is checked to equal eta^j(x0, x0).
    """
    if window < 0:
        raise ValueError("window must be >= 0")
    lo, hi = D.axis - window, D.axis + window
    xs = _fixed_points_1d(D, lo, hi)
    base = StripPoint(D.axis, D.axis)
    out = []
    for x in xs:
        # Fix(g) = Fix(f) x Fix(f) within the strip: only the diagonal survives.
        for y in xs:
            if abs(x - y) < 1:
                p = StripPoint(x, y)
                j = int(x - D.axis)
                assert p == eta_power(base, j)
                out.append((p, "alpha" if j % 2 == 0 else "alpha^-1"))
    return out


def demo_rows(n: int, seed: int) -> list[dict]:
    """Sample points with their eta images and leaf levels, for plotting."""
    rng = random.Random(seed)
    rows = []
    for i in range(n):
        p = random_strip_point(rng, span=3, denominator=64)
        q = eta(p)
        rows.append(
            {
                "index": i,
                "x": format_rational(p.x),
                "y": format_rational(p.y),
                "eta_x": format_rational(q.x),
                "eta_y": format_rational(q.y),
                "stable_level": format_rational(leaf_through(p, STABLE).level),
                "unstable_level": format_rational(leaf_through(p, UNSTABLE).level),
                "eta_stable_leaf_image": format_rational(leaf_image(leaf_through(p, STABLE)).level),
            }
        )
    return rows


def as_strip_point(x: RationalLike, y: RationalLike) -> StripPoint:
    return StripPoint(parse_rational(x), parse_rational(y))
