"""Exact 2x2 integer linear algebra and rational points of the plane.

Everything here is built on Python ints and :class:`fractions.Fraction`, so
there is no overflow and no rounding. Values are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Iterable, Union

from .errors import NonInvertible

RationalLike = Union[int, Fraction, str]


def parse_rational(value: RationalLike) -> Fraction:
    """Read an int, Fraction or ``"p/q"`` / decimal string exactly.

    Floats are refused: they would silently smuggle binary rounding into
    exact computations.
    """
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def format_rational(q: Fraction) -> str:
    """Lossless ``"p/q"`` form; the denominator is always written."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _as_int(value) -> int:
    if isinstance(value, bool):
        raise TypeError("bool is not an integer entry")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        return int(value.strip())
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    raise TypeError(f"expected an integer entry, got {value!r}")


@dataclass(frozen=True)
class RationalVec2:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", parse_rational(self.x))
        object.__setattr__(self, "y", parse_rational(self.y))

    def __add__(self, other: RationalVec2) -> RationalVec2:
        return RationalVec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: RationalVec2) -> RationalVec2:
        return RationalVec2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> RationalVec2:
        return RationalVec2(-self.x, -self.y)

    def scale(self, s: RationalLike) -> RationalVec2:
        s = parse_rational(s)
        return RationalVec2(self.x * s, self.y * s)

    def mod1(self) -> RationalVec2:
        """Representative in the unit square [0,1)^2."""
        return RationalVec2(self.x - (self.x // 1), self.y - (self.y // 1))

    def is_integral(self) -> bool:
        return self.x.denominator == 1 and self.y.denominator == 1

    def common_denominator(self) -> int:
        return self.x.denominator * self.y.denominator // gcd(self.x.denominator, self.y.denominator)

    def as_tuple(self) -> tuple[Fraction, Fraction]:
        return (self.x, self.y)

    def to_json(self) -> list[str]:
        return [format_rational(self.x), format_rational(self.y)]

    @classmethod
    def from_json(cls, data: Iterable[RationalLike]) -> RationalVec2:
        x, y = data
        return cls(parse_rational(x), parse_rational(y))

    def __repr__(self) -> str:
        return f"({self.x}, {self.y})"


@dataclass(frozen=True)
class IntMatrix2:
    """Row-major 2x2 integer matrix ((a, b), (c, d))."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, _as_int(getattr(self, name)))

    @classmethod
    def from_rows(cls, rows) -> IntMatrix2:
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def identity(cls) -> IntMatrix2:
        return cls(1, 0, 0, 1)

    @property
    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def trace(self) -> int:
        return self.a + self.d

    def is_unimodular(self) -> bool:
        return self.det() in (1, -1)

    def max_abs(self) -> int:
        return max(abs(e) for e in self.entries)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix2):
            return IntMatrix2(
                self.a * other.a + self.b * other.c,
                self.a * other.b + self.b * other.d,
                self.c * other.a + self.d * other.c,
                self.c * other.b + self.d * other.d,
            )
        if isinstance(other, RationalVec2):
            return RationalVec2(self.a * other.x + self.b * other.y, self.c * other.x + self.d * other.y)
        if isinstance(other, tuple) and len(other) == 2:
            x, y = other
            return (self.a * x + self.b * y, self.c * x + self.d * y)
        return NotImplemented

    def __neg__(self) -> IntMatrix2:
        return IntMatrix2(-self.a, -self.b, -self.c, -self.d)

    def __add__(self, other: IntMatrix2) -> IntMatrix2:
        return IntMatrix2(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other: IntMatrix2) -> IntMatrix2:
        return IntMatrix2(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def scale(self, s: int) -> IntMatrix2:
        return IntMatrix2(s * self.a, s * self.b, s * self.c, s * self.d)

    def adjugate(self) -> IntMatrix2:
        return IntMatrix2(self.d, -self.b, -self.c, self.a)

    def inverse(self) -> IntMatrix2:
        det = self.det()
        if det not in (1, -1):
            raise NonInvertible(f"det = {det}; no inverse in GL(2,Z)")
        return self.adjugate().scale(det)

    def __pow__(self, n: int) -> IntMatrix2:
        if n < 0:
            return self.inverse() ** (-n)
        result = IntMatrix2.identity()
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def to_json(self) -> list[list[str]]:
        return [[str(self.a), str(self.b)], [str(self.c), str(self.d)]]

    @classmethod
    def from_json(cls, data) -> IntMatrix2:
        return cls.from_rows(data)

    def __repr__(self) -> str:
        return f"(({self.a},{self.b}),({self.c},{self.d}))"


IDENTITY = IntMatrix2.identity()


def mat_mul(m: IntMatrix2, n: IntMatrix2) -> IntMatrix2:
    return m @ n


def conjugate(b: IntMatrix2, a: IntMatrix2) -> IntMatrix2:
    """Return B A B^-1; raises NonInvertible unless det B = +-1."""
    return b @ a @ b.inverse()


@dataclass(frozen=True)
class SnfDecomposition:
    """U @ source @ V == D with U, V unimodular and D = diag(d1, d2), d1 | d2."""

    source: IntMatrix2
    U: IntMatrix2
    V: IntMatrix2
    D: IntMatrix2

    @property
    def invariant_factors(self) -> tuple[int, int]:
        return (self.D.a, self.D.d)

    def check(self) -> bool:
        d1, d2 = self.invariant_factors
        return (
            self.U @ self.source @ self.V == self.D
            and self.U.is_unimodular()
            and self.V.is_unimodular()
            and self.D.b == 0
            and self.D.c == 0
            and d1 >= 0
            and d2 >= 0
            and (d2 == 0 if d1 == 0 else d2 % d1 == 0)
        )

    def in_column_lattice(self, v) -> bool:
        """True iff v lies in source @ Z^2."""
        w1, w2 = self.U @ tuple(v)
        return all(
            (w == 0) if dk == 0 else (w % dk == 0)
            for w, dk in zip((w1, w2), self.invariant_factors)
        )

    def solve(self, v):
        """Integer y with source @ y == v, or None if v is outside the lattice."""
        if not self.in_column_lattice(v):
            return None
        w = self.U @ tuple(v)
        z = tuple(0 if dk == 0 else wk // dk for wk, dk in zip(w, self.invariant_factors))
        return self.V @ z


def smith_normal_form(m: IntMatrix2) -> SnfDecomposition:
    M = [[m.a, m.b], [m.c, m.d]]
    U = [[1, 0], [0, 1]]
    V = [[1, 0], [0, 1]]

    def swap_rows():
        M.reverse()
        U.reverse()

    def swap_cols():
        for row in M + V:
            row.reverse()

    def add_row(dst, src, q):
        for X in (M, U):
            X[dst] = [x + q * y for x, y in zip(X[dst], X[src])]

    def add_col(dst, src, q):
        for X in (M, V):
            for row in X:
                row[dst] += q * row[src]

    def negate_row(i):
        for X in (M, U):
            X[i] = [-x for x in X[i]]

    if any(M[i][j] for i in range(2) for j in range(2)):
        while True:
            _, i, j = min((abs(M[i][j]), i, j) for i in range(2) for j in range(2) if M[i][j])
            if i:
                swap_rows()
            if j:
                swap_cols()
            p = M[0][0]
            add_row(1, 0, -(M[1][0] // p))
            add_col(1, 0, -(M[0][1] // p))
            if M[1][0] or M[0][1]:
                continue
            if M[1][1] % p:
                add_row(0, 1, 1)
                continue
            break
        for i in range(2):
            if M[i][i] < 0:
                negate_row(i)

    snf = SnfDecomposition(source=m, U=IntMatrix2.from_rows(U), V=IntMatrix2.from_rows(V), D=IntMatrix2.from_rows(M))
    assert snf.check(), f"SNF invariant broken for {m}"
    return snf
