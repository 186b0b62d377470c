"""First homology of the mapping torus W, the fibered knot exterior N, and
its Dehn fillings, plus the slope bookkeeping on the boundary torus of N.

N is treated as the mapping torus of the punctured torus T0 with monodromy
induced by A, so H1(N) = coker(A - I on H1(T0)) + Z<m>, where m is the
meridian crossing each fiber once and l = dT0 is the longitude.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .errors import ZeroSlope
from .exact_core import IntMatrix2, smith_normal_form
from .sol_symmetry import SolSymmetry
from .toral_dynamics import CAT_MAP


@dataclass(frozen=True)
class AbelianGroup:
    """Z^rank + Z/d1 + ... + Z/dr with d1 | d2 | ... and every di >= 2."""

    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        t = tuple(self.torsion)
        if any(d < 2 for d in t) or any(b % a for a, b in zip(t, t[1:])):
            raise ValueError(f"torsion {t} is not a canonical divisibility chain")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def from_cyclic_orders(cls, orders) -> AbelianGroup:
        """Canonical form of a direct sum of cyclic groups Z/n (n = 0 meaning Z)."""
        rank = sum(1 for n in orders if n == 0)
        finite = [abs(n) for n in orders if abs(n) > 1]
        # (a, b) -> (gcd, lcm) leaves the group unchanged; iterate to a chain.
        changed = True
        while changed:
            changed = False
            finite.sort()
            for i in range(len(finite)):
                for j in range(i + 1, len(finite)):
                    a, b = finite[i], finite[j]
                    if b % a:
                        g = gcd(a, b)
                        finite[i], finite[j] = g, a * b // g
                        changed = True
            finite = [n for n in finite if n > 1]
        return cls(rank, tuple(sorted(finite)))

    @property
    def order(self) -> int | None:
        """Cardinality, or None when infinite."""
        if self.rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def __str__(self) -> str:
        parts = (["Z"] * self.rank) + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data: dict) -> AbelianGroup:
        return cls(int(data["rank"]), tuple(int(d) for d in data["torsion"]))


@dataclass(frozen=True)
class CurveClass:
    """a*l + b*m on the boundary torus of N."""

    l_coeff: int
    m_coeff: int

    def is_slope(self) -> bool:
        return (self.l_coeff, self.m_coeff) != (0, 0) and gcd(self.l_coeff, self.m_coeff) == 1

    def __neg__(self) -> CurveClass:
        return CurveClass(-self.l_coeff, -self.m_coeff)

    def __str__(self) -> str:
        return f"{self.l_coeff}*l + {self.m_coeff}*m"

    def to_json(self) -> list[int]:
        return [self.l_coeff, self.m_coeff]


def cokernel(M: IntMatrix2) -> AbelianGroup:
    return AbelianGroup.from_cyclic_orders(smith_normal_form(M).invariant_factors)


def h1_mapping_torus(monodromy: IntMatrix2) -> AbelianGroup:
    """H1 of the torus bundle: Z^2 / (monodromy - I) Z^2 plus the base circle."""
    inv = smith_normal_form(monodromy - IntMatrix2.identity()).invariant_factors
    return AbelianGroup.from_cyclic_orders((*inv, 0))


def abelianize(word: str) -> tuple[int, int]:
    """Exponent sums of a word in a, b, A=a^-1, B=b^-1."""
    counts = {"a": (1, 0), "A": (-1, 0), "b": (0, 1), "B": (0, -1)}
    x = y = 0
    for ch in word:
        dx, dy = counts[ch]
        x, y = x + dx, y + dy
    return (x, y)


#: Boundary of the punctured torus as a word in the free group pi_1(T0) = <a, b>.
PUNCTURE_WORD = "abAB"


@dataclass(frozen=True)
class HomologyVerdict:
    curve: CurveClass
    value: int
    group: AbelianGroup
    trace: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "curve": self.curve.to_json(),
            "value": self.value,
            "group": self.group.to_json(),
            "trace": list(self.trace),
        }


def h1_exterior(monodromy: IntMatrix2 = CAT_MAP) -> AbelianGroup:
    return h1_mapping_torus(monodromy)


def exterior_class(curve: CurveClass, monodromy: IntMatrix2 = CAT_MAP) -> HomologyVerdict:
    """Image of a*l + b*m in H1(N), recorded as its coordinate along m.

    [l] is the abelianised puncture word, which vanishes already in H1(T0);
    [m] projects to the generator of the base-circle factor.
    """
    l_image = abelianize(PUNCTURE_WORD)
    trace = [f"l = dT0 = {PUNCTURE_WORD} in pi_1(T0); abelianised to {l_image}"]
    assert l_image == (0, 0)
    group = h1_exterior(monodromy)
    inv = smith_normal_form(monodromy - IntMatrix2.identity()).invariant_factors
    trace.append(f"coker(A - I) has invariant factors {inv}; H1(N) = {group}")
    trace.append("m meets each fiber once, so [m] = 1 in the base-circle factor")
    value = curve.m_coeff
    trace.append(f"[{curve}] = {curve.l_coeff}*0 + {curve.m_coeff}*1 = {value}")
    return HomologyVerdict(curve, value, group, tuple(trace))


def longitude_class_in_exterior(monodromy: IntMatrix2 = CAT_MAP) -> HomologyVerdict:
    return exterior_class(CurveClass(1, 0), monodromy)


def h1_filling(k: int, monodromy: IntMatrix2 = CAT_MAP) -> AbelianGroup:
    """H1 of the filling along l + k m: kill the image k of the slope in H1(N)."""
    torsion_part = [d for d in smith_normal_form(monodromy - IntMatrix2.identity()).invariant_factors if d != 1]
    slope_value = exterior_class(CurveClass(1, k), monodromy).value
    return AbelianGroup.from_cyclic_orders((*torsion_part, slope_value))


def slope_image(S: SolSymmetry, k: int) -> CurveClass:
    """Image of l + k m: l picks up det B, m picks up eps."""
    sign_l, sign_m = S.B.det(), S.eps
    return CurveClass(sign_l, sign_m * k)


def extends_to_filling(S: SolSymmetry, k: int) -> bool:
    """Whether the boundary map sends the filling slope to +-(l + k m).

    Only then can it extend over the glued solid torus.
    """
    if k == 0:
        raise ZeroSlope("k = 0")
    image = slope_image(S, k)
    target = CurveClass(1, k)
    return image == target or image == -target
