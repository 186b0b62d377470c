"""Blow-up circle of the origin and the boundary torus of the knot exterior.

Directions at the origin are angles theta in [0,1) (turns).  A matrix acts
on them by theta -> angle(B (cos 2 pi theta, sin 2 pi theta)).

The boundary torus carries coordinates (theta, t) with l the theta-circle
and m the t-circle.  The flow there is modelled by the field (g(theta), 1)
with g(theta) = c sin(4 pi theta): four closed orbits at theta = 0, 1/4,
1/2, 3/4, alternately repelling and attracting in theta.  Any
nondegenerate four-zero model would do; the amplitude is a free choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DegenerateSegment, NotHyperbolic, ZeroSlope
from .exact_core import IntMatrix2, format_rational
from .sol_symmetry import SolSymmetry, standard_symmetry
from .surgery_homology import CurveClass, exterior_class, h1_filling, slope_image
from .toral_dynamics import CAT_MAP

TAU = 2 * math.pi


@dataclass(frozen=True)
class DirectionPoint:
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", float(self.theta) % 1.0)

    def vector(self) -> tuple[float, float]:
        return (math.cos(TAU * self.theta), math.sin(TAU * self.theta))

    def antipode(self) -> DirectionPoint:
        return DirectionPoint(self.theta + 0.5)

    def distance(self, other: DirectionPoint) -> float:
        d = abs(self.theta - other.theta) % 1.0
        return min(d, 1.0 - d)


def direction_of(x: float, y: float) -> DirectionPoint:
    return DirectionPoint(math.atan2(y, x) / TAU)


def circle_map(B: IntMatrix2, theta: DirectionPoint) -> DirectionPoint:
    if B.det() == 0:
        raise ValueError("singular matrix does not act on directions")
    x, y = theta.vector()
    return direction_of(B.a * x + B.b * y, B.c * x + B.d * y)


def circle_degree(B: IntMatrix2, grid: int = 1000) -> int:
    """Degree of the induced circle map, by summing wrapped increments."""
    total = 0.0
    prev = circle_map(B, DirectionPoint(0.0)).theta
    for i in range(1, grid + 1):
        cur = circle_map(B, DirectionPoint(i / grid)).theta
        step = (cur - prev + 0.5) % 1.0 - 0.5
        total += step
        prev = cur
    return round(total)


def fixed_directions(A: IntMatrix2) -> list[tuple[DirectionPoint, float]]:
    """The four fixed directions of a hyperbolic matrix, sorted by angle,
    with the derivative of the circle map there.

    At an eigendirection with eigenvalue lam the derivative is det A / lam^2.
    """
    if abs(A.trace()) <= 2:
        raise NotHyperbolic(f"|trace {A}| <= 2")
    tr, det = A.trace(), A.det()
    disc = math.sqrt(tr * tr - 4 * det)
    out = []
    for lam in ((tr + disc) / 2, (tr - disc) / 2):
        if A.b != 0:
            v = (A.b, lam - A.a)
        else:
            v = (lam - A.d, A.c)
        d = direction_of(*v)
        mult = det / (lam * lam)
        out.append((d, mult))
        out.append((d.antipode(), mult))
    out.sort(key=lambda pair: pair[0].theta)
    return out


@dataclass(frozen=True)
class BoundaryField:
    amplitude: float = 0.15

    def __post_init__(self):
        if not self.amplitude > 0:
            raise ValueError("amplitude must be positive")

    def g(self, theta: float) -> float:
        return self.amplitude * math.sin(2 * TAU * theta)

    def dg(self, theta: float) -> float:
        return self.amplitude * 2 * TAU * math.cos(2 * TAU * theta)

    @property
    def closed_orbits(self) -> tuple[float, ...]:
        return (0.0, 0.25, 0.5, 0.75)

    def orbit_stability(self) -> list[tuple[float, str]]:
        """Repelling/attracting in theta, from the sign of g' at each zero."""
        return [(z, "repelling" if self.dg(z) > 0 else "attracting") for z in self.closed_orbits]

    def unit(self, theta: float) -> tuple[float, float]:
        g = self.g(theta)
        n = math.hypot(g, 1.0)
        return (g / n, 1.0 / n)

    @property
    def direction_lipschitz(self) -> float:
        """Bound on |d/dtheta| of the unit field: |g'| / (1 + g^2) <= 4 pi c."""
        return 2 * TAU * self.amplitude


@dataclass(frozen=True)
class PolyCurve:
    """Closed piecewise-linear curve on the (theta, t) torus.

    Vertices are given in the universal cover; the last vertex equals the
    first plus the homology class (a, b) = a*l + b*m.  Corners, including
    the seam at the first vertex, are rounded with circular arcs.
    """

    vertices: tuple[tuple[Fraction, Fraction], ...]
    declared_class: tuple[int, int]
    corner_radius: float = 0.05

    def computed_class(self) -> tuple[int, int]:
        (x0, y0), (x1, y1) = self.vertices[0], self.vertices[-1]
        dx, dy = Fraction(x1) - Fraction(x0), Fraction(y1) - Fraction(y0)
        if dx.denominator != 1 or dy.denominator != 1:
            raise ValueError("curve does not close up on the torus")
        return (int(dx), int(dy))

    def class_matches(self) -> bool:
        return self.computed_class() == tuple(self.declared_class)

    def to_json(self) -> dict:
        return {
            "vertices": [[format_rational(Fraction(x)), format_rational(Fraction(y))] for x, y in self.vertices],
            "class": list(self.declared_class),
            "corner_radius": self.corner_radius,
        }


@dataclass(frozen=True)
class _Piece:
    kind: str
    length: float
    curvature: float
    start: tuple[float, float]
    heading: float
    turn: float = 0.0
    center: tuple[float, float] | None = None
    tangent: tuple[float, float] | None = None

    def at(self, s: float) -> tuple[tuple[float, float], tuple[float, float]]:
        """Point and unit tangent at arc length s from the start."""
        if self.kind == "segment":
            tx, ty = self.tangent
            return (self.start[0] + s * tx, self.start[1] + s * ty), (tx, ty)
        frac = s / self.length
        ang = self.heading + frac * self.turn
        cx, cy = self.center
        r = 1.0 / self.curvature
        # Radius vector is the tangent rotated by -+90 degrees toward the centre.
        sgn = 1.0 if self.turn > 0 else -1.0
        px = cx + sgn * r * math.sin(ang)
        py = cy - sgn * r * math.cos(ang)
        return (px, py), (math.cos(ang), math.sin(ang))


def _pieces(curve: PolyCurve) -> list[_Piece]:
    pts = [(float(x), float(y)) for x, y in curve.vertices]
    n = len(pts) - 1
    if n < 1:
        raise DegenerateSegment("curve needs at least one segment")
    segs = []
    for i in range(n):
        (x0, y0), (x1, y1) = pts[i], pts[i + 1]
        length = math.hypot(x1 - x0, y1 - y0)
        if length == 0.0:
            raise DegenerateSegment(f"segment {i} has zero length")
        segs.append(((x0, y0), math.atan2(y1 - y0, x1 - x0), length, ((x1 - x0) / length, (y1 - y0) / length)))

    # Turn at the junction entering segment i (the seam for i = 0).
    turns, trims = [], []
    r = curve.corner_radius
    for i in range(n):
        h_in, h_out = segs[i - 1][1], segs[i][1]
        turn = (h_out - h_in + math.pi) % TAU - math.pi
        turns.append(turn)
        trims.append(0.0 if abs(turn) < 1e-15 else r * math.tan(abs(turn) / 2))

    pieces = []
    for i in range(n):
        start, heading, length, tangent = segs[i]
        lead, tail = trims[i], trims[(i + 1) % n]
        if lead + tail >= length:
            raise DegenerateSegment(f"segment {i} too short for corner radius {r}")
        if trims[i]:
            # Arc ending where segment i's trimmed part begins.
            h_in = segs[i - 1][1]
            ax = start[0] - lead * math.cos(h_in)
            ay = start[1] - lead * math.sin(h_in)
            sgn = 1.0 if turns[i] > 0 else -1.0
            center = (ax - sgn * r * math.sin(h_in), ay + sgn * r * math.cos(h_in))
            pieces.append(_Piece("arc", r * abs(turns[i]), 1.0 / r, (ax, ay), h_in, turns[i], center))
        s0 = (start[0] + lead * tangent[0], start[1] + lead * tangent[1])
        pieces.append(_Piece("segment", length - lead - tail, 0.0, s0, heading, tangent=tangent))
    return pieces


@dataclass(frozen=True)
class TransversalityReport:
    margin: float
    samples: int
    lipschitz_slack: float
    certified_lower_bound: float
    consistent_sign: bool
    curve_class: tuple[int, int]
    class_matches: bool

    @property
    def certified(self) -> bool:
        return self.certified_lower_bound > 0 and self.consistent_sign and self.class_matches

    def to_json(self) -> dict:
        return {
            "class": list(self.curve_class),
            "class_matches": self.class_matches,
            "margin": self.margin,
            "samples": self.samples,
            "lipschitz_slack": self.lipschitz_slack,
            "certified_lower_bound": self.certified_lower_bound,
            "consistent_sign": self.consistent_sign,
            "certified": self.certified,
        }


def _cross_samples(curve: PolyCurve, field: BoundaryField, samples: int):
    if samples < 100:
        raise ValueError("need at least 100 samples per piece")
    for piece in _pieces(curve):
        h = piece.length / (samples - 1)
        lip = piece.curvature + field.direction_lipschitz
        for i in range(samples):
            (theta, _), (tx, ty) = piece.at(i * h)
            ux, uy = field.unit(theta)
            yield tx * uy - ty * ux, lip * h / 2


def transversality_report(curve: PolyCurve, field: BoundaryField, samples: int = 10_000) -> TransversalityReport:
    """Sampled |T x G| with unit tangent T and unit field G.

    Between neighbouring samples the cross product moves by at most
    (curvature + 4 pi c) * spacing, so the sampled minimum minus half that
    is a rigorous lower bound along the whole curve.
    """
    margin, slack = math.inf, 0.0
    signs = set()
    count = 0
    for cross, piece_slack in _cross_samples(curve, field, samples):
        margin = min(margin, abs(cross))
        slack = max(slack, piece_slack)
        if cross:
            signs.add(cross > 0)
        count += 1
    return TransversalityReport(
        margin=margin,
        samples=count,
        lipschitz_slack=slack,
        certified_lower_bound=margin - slack,
        consistent_sign=len(signs) == 1 and margin > 0,
        curve_class=curve.computed_class(),
        class_matches=curve.class_matches(),
    )


def verify_transverse(curve: PolyCurve, field: BoundaryField, samples: int = 10_000) -> float:
    return transversality_report(curve, field, samples).margin


def build_transverse_curve(k: int, field: BoundaryField = BoundaryField(), corner_radius: float = 0.05) -> PolyCurve:
    """A closed curve of class l + k m crossing every boundary flowline.

    The k windings run vertically in a band where the field's theta-drift has
    the sign that makes the crossing agree with the horizontal traverse:
    g < 0 (theta near 3/8) for upward windings, g > 0 (near 1/8) for
    downward ones.  Picking the other band forces a tangency at the corners.
    """
    if k == 0:
        return PolyCurve(((Fraction(0), Fraction(1, 2)), (Fraction(1), Fraction(1, 2))), (1, 0), corner_radius)
    band = Fraction(3, 8) if k > 0 else Fraction(1, 8)
    verts = ((band, Fraction(0)), (band, Fraction(k)), (band + 1, Fraction(k)))
    return PolyCurve(verts, (1, k), corner_radius)


def vertical_circle(theta: Fraction) -> PolyCurve:
    return PolyCurve(((Fraction(theta), Fraction(0)), (Fraction(theta), Fraction(1))), (0, 1))


def curve_samples(curve: PolyCurve, per_piece: int = 100) -> list[tuple[float, float]]:
    out = []
    for piece in _pieces(curve):
        for i in range(per_piece):
            (x, y), _ = piece.at(i * piece.length / per_piece)
            out.append((x, y))
    return out


@dataclass(frozen=True)
class PinchEntry:
    symmetry: str
    image: CurveClass
    status: str

    def to_json(self) -> dict:
        return {"symmetry": self.symmetry, "image": self.image.to_json(), "status": self.status}


@dataclass(frozen=True)
class PinchReport:
    k: int
    fiber_class: CurveClass
    fiber_class_in_filling: int
    filling_order: int | None
    entries: tuple[PinchEntry, ...] = field(default=())

    def status(self, name: str) -> str:
        for e in self.entries:
            if e.symmetry == name:
                return e.status
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "fiber_class": self.fiber_class.to_json(),
            "fiber_class_in_filling": self.fiber_class_in_filling,
            "filling_order": self.filling_order,
            "entries": [e.to_json() for e in self.entries],
        }


def pinch_check(k: int, symmetries: list[SolSymmetry] | None = None, monodromy: IntMatrix2 = CAT_MAP) -> PinchReport:
    """Compatibility of boundary maps with collapsing the circle fibers of
    class l + k m: the fiber dies in H1 of the filling, and a boundary map
    descends only if it sends the fiber class to +-itself."""
    if k == 0:
        raise ZeroSlope("k = 0")
    if symmetries is None:
        symmetries = [standard_symmetry(n, monodromy) for n in ("g0", "g1", "g2", "g3", "g4")]
    fiber = CurveClass(1, k)
    h1 = h1_filling(k, monodromy)
    value = exterior_class(fiber, monodromy).value
    order = h1.order
    residue = value % order if order else value
    entries = []
    for S in symmetries:
        image = slope_image(S, k)
        if image == fiber:
            status = "preserved"
        elif image == -fiber:
            status = "negated"
        else:
            status = "mismatch"
        entries.append(PinchEntry(S.name, image, status))
    return PinchReport(k, fiber, residue, order, tuple(entries))
