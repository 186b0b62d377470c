"""Linear symmetries of the sol-manifold W = T^2 x [0,1] / (x,1) ~ (Ax,0).

A pair (B, eps) with B A B^-1 = A^eps gives the homeomorphism
(x, t) -> (Bx, t) when eps = +1 and (x, t) -> (Bx, 1 - t) when eps = -1.
Two such maps differing by a power of A are isotopic, so mapping classes are
cosets modulo <A>.  -I is *not* divided out: it gives a nontrivial class.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .errors import NonInvertible, NotClosed, NotNormalizing
from .exact_core import IntMatrix2, conjugate
from .toral_dynamics import CAT_MAP

I2 = IntMatrix2.identity()
B1 = IntMatrix2(-1, 0, 1, 1)
B2 = IntMatrix2(-1, 0, 0, -1)
B3 = IntMatrix2(1, 0, -1, -1)
B4 = IntMatrix2(0, 1, -1, 0)
#: Square root of the cat map, F @ F == CAT_MAP; det F = -1.
F = IntMatrix2(1, 1, 1, 0)

STANDARD_MATRICES = {"g0": I2, "g1": B1, "g2": B2, "g3": B3, "g4": B4, "F": F}


@dataclass(frozen=True)
class SolSymmetry:
    B: IntMatrix2
    eps: int
    label: str | None = field(default=None, compare=False)
    monodromy: IntMatrix2 = CAT_MAP

    def __post_init__(self):
        if self.eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")
        if not self.B.is_unimodular():
            raise NonInvertible(f"det {self.B} = {self.B.det()}")
        A = self.monodromy
        if conjugate(self.B, A) != A**self.eps:
            raise NotNormalizing(f"{self.B} A {self.B}^-1 != A^{self.eps}")

    def __mul__(self, other: SolSymmetry) -> SolSymmetry:
        if self.monodromy != other.monodromy:
            raise ValueError("symmetries of different mapping tori")
        return SolSymmetry(self.B @ other.B, self.eps * other.eps, None, self.monodromy)

    def inverse(self) -> SolSymmetry:
        return SolSymmetry(self.B.inverse(), self.eps, None, self.monodromy)

    @property
    def name(self) -> str:
        return self.label or repr(self.B)

    def to_json(self) -> dict:
        return {"B": self.B.to_json(), "eps": self.eps, "label": self.label}


def make_symmetry(B: IntMatrix2, A: IntMatrix2 = CAT_MAP, label: str | None = None) -> SolSymmetry:
    """Build (B, eps), reading eps off from which of A, A^-1 the conjugate equals."""
    conj = conjugate(B, A)
    if conj == A:
        return SolSymmetry(B, 1, label, A)
    if conj == A.inverse():
        return SolSymmetry(B, -1, label, A)
    raise NotNormalizing(f"{B} A {B}^-1 = {conj} is neither A nor A^-1")


def standard_symmetry(name: str, A: IntMatrix2 = CAT_MAP) -> SolSymmetry:
    return make_symmetry(STANDARD_MATRICES[name], A, label=name)


def orientation_sign(S: SolSymmetry) -> int:
    # det B orients the torus factor, eps the interval factor.
    return S.B.det() * S.eps


def boundary_action(S: SolSymmetry) -> tuple[int, int]:
    """Signs on (l, m): the blown-up direction circle has degree det B, the
    fiber direction is reversed exactly when eps = -1."""
    return (S.B.det(), S.eps)


def _key(M: IntMatrix2):
    return (M.max_abs(), M.entries)


def _sumsq(M: IntMatrix2) -> int:
    return sum(e * e for e in M.entries)


def _convex_min(start: IntMatrix2, step: IntMatrix2) -> IntMatrix2:
    # j -> |start step^j|^2 is convex for a hyperbolic or parabolic step of det 1.
    back = step.inverse()
    cur = start
    while True:
        if _sumsq(cur @ step) < _sumsq(cur):
            cur = cur @ step
        elif _sumsq(cur @ back) < _sumsq(cur):
            cur = cur @ back
        else:
            break
    best = cur
    for move in (step, back):
        probe = cur @ move
        # max|entry|^2 >= sumsq/4, and sumsq only grows from here on.
        while _sumsq(probe) <= 4 * best.max_abs() ** 2:
            if _key(probe) < _key(best):
                best = probe
            probe = probe @ move
    return best


def canonical_coset(B: IntMatrix2, A: IntMatrix2 = CAT_MAP) -> IntMatrix2:
    """Representative of {B A^j} minimising max|entry|, ties broken lexicographically."""
    if A**12 == I2:
        return min((B @ A**j for j in range(12)), key=_key)
    if A.det() == 1:
        return _convex_min(B, A)
    A2 = A @ A
    return min((_convex_min(B, A2), _convex_min(B @ A, A2)), key=_key)


@dataclass(frozen=True)
class MappingClass:
    representative: SolSymmetry
    coset: IntMatrix2

    @property
    def orientation_sign(self) -> int:
        return orientation_sign(self.representative)

    @property
    def boundary_action(self) -> tuple[int, int]:
        return boundary_action(self.representative)

    @property
    def eps(self) -> int:
        return self.representative.eps

    @property
    def label(self) -> str | None:
        return self.representative.label

    def to_json(self) -> dict:
        return {
            "coset": self.coset.to_json(),
            "label": self.label,
            "eps": self.eps,
            "det": self.coset.det(),
            "orientation_sign": self.orientation_sign,
            "boundary_action": list(self.boundary_action),
        }


def mapping_class(S: SolSymmetry) -> MappingClass:
    A = S.monodromy
    rep = canonical_coset(S.B, A)
    label = S.label or _standard_label(rep, A)
    return MappingClass(SolSymmetry(rep, S.eps, label, A), rep)


@lru_cache(maxsize=32)
def _standard_cosets(A: IntMatrix2) -> dict:
    out = {}
    for name, M in STANDARD_MATRICES.items():
        try:
            make_symmetry(M, A)
        except NotNormalizing:
            continue
        out.setdefault(canonical_coset(M, A), name)
    return out


def _standard_label(coset: IntMatrix2, A: IntMatrix2) -> str | None:
    return _standard_cosets(A).get(coset)


def enumerate_symmetries(A: IntMatrix2 = CAT_MAP, bound: int = 1) -> list[SolSymmetry]:
    """Every unimodular B with max|entry| <= bound that normalises <A>."""
    found = []
    rng = range(-bound, bound + 1)
    for a, b, c, d in product(rng, repeat=4):
        if a * d - b * c not in (1, -1):
            continue
        try:
            found.append(make_symmetry(IntMatrix2(a, b, c, d), A))
        except NotNormalizing:
            continue
    found.sort(key=lambda s: _key(s.B))
    return found


def identify_group(order: int, order_counts: dict[int, int], abelian: bool) -> str:
    if order == 1:
        return "trivial"
    if order == 2:
        return "Z2"
    if order == 4:
        return "Z4" if order_counts.get(4) else "Z2+Z2"
    if order == 8 and not abelian and order_counts.get(2) == 5:
        return "D4"
    return "other"


@dataclass(frozen=True)
class GroupTable:
    elements: tuple[MappingClass, ...]
    cayley: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def element_order(self, i: int) -> int:
        k, cur = 1, i
        while cur != 0:
            cur = self.cayley[cur][i]
            k += 1
        return k

    @property
    def order_profile(self) -> tuple[int, ...]:
        return tuple(sorted(self.element_order(i) for i in range(self.order)))

    @property
    def order_counts(self) -> dict[int, int]:
        return dict(sorted(Counter(self.order_profile).items()))

    def is_abelian(self) -> bool:
        n = self.order
        return all(self.cayley[i][j] == self.cayley[j][i] for i in range(n) for j in range(n))

    def is_latin_square(self) -> bool:
        full = set(range(self.order))
        rows_ok = all(set(row) == full for row in self.cayley)
        cols_ok = all({row[j] for row in self.cayley} == full for j in range(self.order))
        return rows_ok and cols_ok

    def is_associative(self) -> bool:
        t = self.cayley
        n = self.order
        return all(t[t[i][j]][k] == t[i][t[j][k]] for i in range(n) for j in range(n) for k in range(n))

    @property
    def identification(self) -> str:
        return identify_group(self.order, self.order_counts, self.is_abelian())

    def index_of(self, coset: IntMatrix2) -> int:
        for i, el in enumerate(self.elements):
            if el.coset == coset:
                return i
        raise KeyError(coset)

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "identification": self.identification,
            "abelian": self.is_abelian(),
            "order_profile": list(self.order_profile),
            "elements": [el.to_json() for el in self.elements],
            "cayley": [list(row) for row in self.cayley],
        }


def quotient_group(symmetries: Iterable[SolSymmetry], A: IntMatrix2 = CAT_MAP) -> GroupTable:
    """Cosets of the given symmetries modulo <A>, with their Cayley table.

    The input must be closed under products at the coset level; otherwise
    NotClosed is raised with the offending pair and product.
    """
    classes: dict[IntMatrix2, MappingClass] = {}
    for S in symmetries:
        if S.monodromy != A:
            raise ValueError("symmetry belongs to a different monodromy")
        mc = mapping_class(S)
        if mc.coset not in classes or (classes[mc.coset].label is None and mc.label):
            classes[mc.coset] = mc
    identity = canonical_coset(I2, A)
    if identity not in classes:
        classes[identity] = mapping_class(SolSymmetry(I2, 1, "g0", A))
    order = sorted(classes, key=lambda c: (c != identity, _key(c)))
    index = {c: i for i, c in enumerate(order)}
    table = []
    for ci in order:
        row = []
        for cj in order:
            prod = canonical_coset(ci @ cj, A)
            if prod not in index:
                raise NotClosed(f"{ci} * {cj} = {prod} is missing", witness=(ci, cj, prod))
            row.append(index[prod])
        table.append(tuple(row))
    return GroupTable(tuple(classes[c] for c in order), tuple(table))


def orientation_preserving_subgroup(G: GroupTable) -> GroupTable:
    keep = [el.representative for el in G.elements if el.orientation_sign == 1]
    A = G.elements[0].representative.monodromy
    return quotient_group(keep, A)


def coset_equal(S: SolSymmetry, T: SolSymmetry) -> bool:
    return S.eps == T.eps and canonical_coset(S.B, S.monodromy) == canonical_coset(T.B, T.monodromy)


def klein_relations(names: Sequence[str] = ("g1", "g2", "g3"), A: IntMatrix2 = CAT_MAP) -> dict:
    """g_i^2 = g0 and g_i g_j = g_k at the coset level, plus the exact matrix
    identities B_i B_j = B_k and B_i^2 = I behind them."""
    g = {n: standard_symmetry(n, A) for n in ("g0", *names)}
    out = {"squares": {}, "products": {}, "matrix_squares": {}, "matrix_products": {}}
    for n in names:
        out["squares"][n] = coset_equal(g[n] * g[n], g["g0"])
        out["matrix_squares"][n] = g[n].B @ g[n].B == I2
    for i, j in product(names, repeat=2):
        if i == j:
            continue
        (k,) = set(names) - {i, j}
        out["products"][f"{i}{j}"] = coset_equal(g[i] * g[j], g[k])
        out["matrix_products"][f"{i}{j}"] = g[i].B @ g[j].B == g[k].B
    return out
