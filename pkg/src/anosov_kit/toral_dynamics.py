"""Periodic points of a toral automorphism and free homotopy classes of the
corresponding closed orbits of its suspension flow.

A closed orbit through a point x of period n lifts to x~ in R^2 with
A^n x~ = x~ + v for an integer vector v. The loop is the element (v, n) of
pi_1 = Z^2 x|_A Z, and its conjugacy class is the set

    { A^m v  mod (A^n - I) Z^2 : 0 <= m < n }.

The range of m is complete because A^n = (A^n - I) + I acts trivially on the
quotient Z^2 / (A^n - I) Z^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING

from .errors import Degenerate, NotPeriodic
from .exact_core import IntMatrix2, RationalVec2, format_rational, parse_rational, smith_normal_form

if TYPE_CHECKING:
    from .sol_symmetry import SolSymmetry

#: The cat map ((2,1),(1,1)).
CAT_MAP = IntMatrix2(2, 1, 1, 1)


def torus_point(x, y) -> RationalVec2:
    """Exact point of R^2/Z^2 reduced into [0,1)^2."""
    return RationalVec2(x, y).mod1()


@dataclass(frozen=True, eq=False)
class PeriodicOrbit:
    """A finite A-orbit, stored as an A-forward cycle starting at its seed.

    ``orientation`` is a flag: -1 means the suspended orbit is traversed
    against the flow (this is how images under t -> 1-t symmetries appear).
    The point order is never reversed.
    """

    points: tuple[RationalVec2, ...]
    orientation: int = 1

    @property
    def period(self) -> int:
        return len(self.points)

    @property
    def seed(self) -> RationalVec2:
        return self.points[0]

    def point_set(self) -> frozenset[RationalVec2]:
        return frozenset(self.points)

    def reversed(self) -> PeriodicOrbit:
        return PeriodicOrbit(self.points, -self.orientation)

    def __eq__(self, other):
        if not isinstance(other, PeriodicOrbit):
            return NotImplemented
        if self.orientation != other.orientation or self.period != other.period:
            return False
        if other.seed not in self.points:
            return False
        shift = self.points.index(other.seed)
        return self.points[shift:] + self.points[:shift] == other.points

    def __hash__(self):
        return hash((self.point_set(), self.orientation))

    def to_json(self) -> dict:
        return {
            "points": [p.to_json() for p in self.points],
            "period": self.period,
            "orientation": self.orientation,
        }

    @classmethod
    def from_json(cls, data: dict) -> PeriodicOrbit:
        orbit = cls(tuple(RationalVec2.from_json(p) for p in data["points"]), int(data["orientation"]))
        if orbit.period != int(data.get("period", orbit.period)):
            raise ValueError("period field disagrees with point list")
        return orbit


@dataclass(frozen=True)
class FreeHomotopyClass:
    """(v, n): holonomy vector and signed winding number around the base circle."""

    holonomy: tuple[int, int]
    winding: int
    basepoint: RationalVec2 | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.winding == 0:
            raise ValueError("winding must be nonzero for a closed orbit")
        object.__setattr__(self, "holonomy", tuple(int(h) for h in self.holonomy))

    @property
    def orientation(self) -> int:
        return 1 if self.winding > 0 else -1

    def to_json(self) -> dict:
        out = {"holonomy": [str(h) for h in self.holonomy], "winding": self.winding}
        if self.basepoint is not None:
            out["basepoint"] = self.basepoint.to_json()
        return out

    @classmethod
    def from_json(cls, data: dict) -> FreeHomotopyClass:
        base = data.get("basepoint")
        return cls(
            tuple(int(h) for h in data["holonomy"]),
            int(data["winding"]),
            RationalVec2.from_json(base) if base is not None else None,
        )


def _shifted(A: IntMatrix2, n: int) -> IntMatrix2:
    return A**n - IntMatrix2.identity()


def fixed_point_count(A: IntMatrix2, n: int) -> int:
    """Number of fixed points of A^n on the torus, |det(A^n - I)|."""
    if n < 1:
        raise ValueError("period must be positive")
    det = _shifted(A, n).det()
    if det == 0:
        raise Degenerate(f"det(A^{n} - I) = 0")
    return abs(det)


def periodic_points(A: IntMatrix2, n: int) -> list[RationalVec2]:
    """All x in [0,1)^2 with A^n x = x mod Z^2, sorted.

    With U M V = diag(d1, d2) for M = A^n - I the solutions are exactly
    V diag(1/d1, 1/d2) w for w in [0,d1) x [0,d2).
    """
    fixed_point_count(A, n)
    snf = smith_normal_form(_shifted(A, n))
    d1, d2 = snf.invariant_factors
    points = {
        (snf.V @ RationalVec2(Fraction(i, d1), Fraction(j, d2))).mod1()
        for i in range(d1)
        for j in range(d2)
    }
    return sorted(points, key=RationalVec2.as_tuple)


def orbit_of(A: IntMatrix2, x: RationalVec2) -> PeriodicOrbit:
    """The full A-orbit of a rational point, starting at x.

    Every rational point is periodic when det A = +-1; otherwise the orbit
    may fall into a cycle that never returns to x, which is reported after
    q^2 steps (q the common denominator bounds the number of candidates).
    """
    if isinstance(x, tuple):
        try:
            x = RationalVec2(*x)
        except TypeError as exc:
            raise NotPeriodic(f"inexact coordinates: {exc}") from None
    start = x.mod1()
    q = start.common_denominator()
    points = [start]
    current = (A @ start).mod1()
    for _ in range(q * q):
        if current == start:
            return PeriodicOrbit(tuple(points))
        points.append(current)
        current = (A @ current).mod1()
    raise NotPeriodic(f"{start} does not return within {q * q} steps")


def enumerate_orbits(A: IntMatrix2, n: int, exact_period: bool = True) -> list[PeriodicOrbit]:
    """Distinct orbits among the fixed points of A^n, seeded at their least point."""
    orbits, seen = [], set()
    for p in periodic_points(A, n):
        if p in seen:
            continue
        orb = orbit_of(A, p)
        seen.update(orb.points)
        if not exact_period or orb.period == n:
            orbits.append(orb)
    return orbits


def holonomy_class(A: IntMatrix2, orbit: PeriodicOrbit) -> FreeHomotopyClass:
    n = orbit.period
    v = _shifted(A, n) @ orbit.seed
    if not v.is_integral():
        raise ValueError(f"{orbit.seed} is not fixed by A^{n}")
    return FreeHomotopyClass((int(v.x), int(v.y)), n * orbit.orientation, orbit.seed)


@dataclass(frozen=True)
class ConjugacySearch:
    """Record of the exhaustive coset search behind a free-homotopy verdict."""

    homotopic: bool
    modulus: IntMatrix2 | None
    invariant_factors: tuple[int, int] | None
    attempts: tuple[dict, ...]
    reason: str

    def to_json(self) -> dict:
        return {
            "homotopic": self.homotopic,
            "modulus": self.modulus.to_json() if self.modulus is not None else None,
            "invariant_factors": list(self.invariant_factors) if self.invariant_factors else None,
            "attempts": list(self.attempts),
            "reason": self.reason,
        }


def conjugacy_search(A: IntMatrix2, c1: FreeHomotopyClass, c2: FreeHomotopyClass) -> ConjugacySearch:
    if c1.winding != c2.winding:
        return ConjugacySearch(False, None, None, (), "winding numbers differ")
    n = abs(c1.winding)
    M = _shifted(A, n)
    snf = smith_normal_form(M)
    # A^n acts trivially on Z^2 / M Z^2, so m ranges over one period only.
    An_v = (A**n) @ c1.holonomy
    assert snf.in_column_lattice((An_v[0] - c1.holonomy[0], An_v[1] - c1.holonomy[1]))
    attempts = []
    Am = IntMatrix2.identity()
    for m in range(n):
        w = Am @ c1.holonomy
        diff = (w[0] - c2.holonomy[0], w[1] - c2.holonomy[1])
        y = snf.solve(diff)
        attempts.append(
            {
                "m": m,
                "difference": [str(t) for t in diff],
                "solution": None if y is None else [str(t) for t in y],
            }
        )
        if y is not None:
            assert M @ y == diff
            return ConjugacySearch(True, M, snf.invariant_factors, tuple(attempts), f"A^{m} v1 - v2 in (A^{n}-I)Z^2")
        Am = A @ Am
    return ConjugacySearch(False, M, snf.invariant_factors, tuple(attempts), "no shift lands in the lattice")


def freely_homotopic(A: IntMatrix2, c1: FreeHomotopyClass, c2: FreeHomotopyClass) -> bool:
    return conjugacy_search(A, c1, c2).homotopic


def apply_symmetry(S: SolSymmetry, orbit: PeriodicOrbit) -> PeriodicOrbit:
    """Image of a suspended orbit under (x, t) -> (B x, t) or (B x, 1 - t).

    When eps = -1, B sends A-orbits to A^-1-orbits; the image point set is
    still an A-orbit, re-listed A-forward from B(seed) and flagged reversed.
    """
    image_seed = (S.B @ orbit.seed).mod1()
    image = orbit_of(S.monodromy, image_seed)
    expected = {(S.B @ p).mod1() for p in orbit.points}
    assert image.point_set() == expected and image.period == orbit.period
    return PeriodicOrbit(image.points, orbit.orientation * S.eps)


def fiber_winding(c: FreeHomotopyClass) -> int:
    """Algebraic intersection number with a fiber torus."""
    return c.winding


def brute_force_fixed_points(A: IntMatrix2, n: int, denominator: int | None = None) -> list[RationalVec2]:
    """Independent check: scan the lattice (1/N) Z^2 in [0,1)^2 for A^n x = x.

    Every fixed point of A^n has denominator dividing |det(A^n - I)|, which is
    the default N.  Integer arithmetic only; shares nothing with the SNF path.
    """
    M = _shifted(A, n)
    N = denominator or abs(M.det())
    if N == 0:
        raise Degenerate(f"det(A^{n} - I) = 0")
    hits = []
    for i in range(N):
        for j in range(N):
            u, w = M @ (i, j)
            if u % N == 0 and w % N == 0:
                hits.append(RationalVec2(Fraction(i, N), Fraction(j, N)))
    return hits


def orbit_label(orbit: PeriodicOrbit) -> str:
    return "{" + ", ".join(f"({format_rational(p.x)},{format_rational(p.y)})" for p in orbit.points) + "}"


def parse_point(text: str) -> RationalVec2:
    """Parse ``"1/4,0"`` into a point."""
    xs, ys = text.split(",")
    return RationalVec2(parse_rational(xs), parse_rational(ys))
