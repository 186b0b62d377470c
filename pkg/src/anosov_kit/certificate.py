"""Certificate that Mod(M_k) is the Klein four-group, with every class
represented by a self orbit equivalence of the surgered flow.

Everything finitely checkable is recomputed here; everything else enters as
a named premise.  A certificate records its checks with their inputs, input
hashes and results, so :func:`replay` can re-run it from the JSON alone.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable

from .blowup_boundary import BoundaryField, build_transverse_curve, pinch_check, transversality_report
from .errors import BadIndex, CheckFailed, MissingPremise, PremiseViolated, StaleHash
from .exact_core import IntMatrix2, RationalVec2
from .orbit_space import StripPoint, eta, eta_geometric, eta_power, random_strip_point
from .serialize import digest, real
from .sol_symmetry import (
    enumerate_symmetries,
    klein_relations,
    orientation_preserving_subgroup,
    quotient_group,
    standard_symmetry,
)
from .surgery_homology import exterior_class, CurveClass, extends_to_filling, h1_filling, h1_mapping_torus, slope_image
from .toral_dynamics import (
    CAT_MAP,
    PeriodicOrbit,
    apply_symmetry,
    conjugacy_search,
    fiber_winding,
    holonomy_class,
    orbit_of,
)

SCHEMA_VERSION = 1
SELF = "self-orbit-equivalence"
ETA_COMPOSED = "eta-composed-orbit-equivalence"


@dataclass(frozen=True)
class Premise:
    id: str
    statement: str
    citation: str

    def to_json(self) -> dict:
        return {"id": self.id, "statement": self.statement, "citation": self.citation}


PREMISES: dict[str, Premise] = {
    p.id: p
    for p in (
        Premise(
            "HYPERBOLIC_K",
            "For |k| > 4 the k-surgery on the figure-eight knot is a closed hyperbolic 3-manifold.",
            "Thurston, hyperbolic Dehn surgery on the figure-eight knot",
        ),
        Premise(
            "FIX_OMEGA",
            "For |k| large, the core orbit omega is the unique shortest closed geodesic of M_k, so every "
            "self-homeomorphism is isotopic to one fixing omega.",
            "Thurston (short core geodesics); Mostow rigidity",
        ),
        Premise(
            "MODN_IS_D4",
            "The mapping class group of the figure-eight knot exterior is dihedral of order 8.",
            "Classical symmetry group of the figure-eight knot (knot symmetry tables)",
        ),
        Premise(
            "BG_THEOREM",
            "A self orbit equivalence of a skew R-covered Anosov flow that is isotopic to the identity "
            "preserves every orbit after composing with eta^(-2j) for some j, unique on hyperbolic manifolds.",
            "Barthelme-Gogolev",
        ),
        Premise(
            "ETA_ISOTOPIC_ID",
            "On a closed hyperbolic 3-manifold the half-step map eta and its square are isotopic to the identity.",
            "Gabai-Meyerhoff-Thurston: homotopic homeomorphisms of hyperbolic 3-manifolds are isotopic",
        ),
        Premise(
            "HOMOTOPY_IMPLIES_ISOTOPY",
            "Freely homotopic periodic orbits of a skew R-covered Anosov flow are isotopic.",
            "Barthelme-Fenley",
        ),
        Premise(
            "FIG8_EXTERIOR",
            "The complement of an open neighbourhood of omega in W is the figure-eight knot exterior, "
            "fibered by punctured tori with monodromy induced by A.",
            "Classical: the figure-eight knot is fibered with cat-map monodromy",
        ),
        Premise(
            "ETA_TOWER",
            "The surgered flow is skew R-covered; the orbits freely homotopic to alpha are eta^(2j)(alpha), "
            "those homotopic to alpha^-1 are eta^(2j+1)(alpha), pairwise distinct on hyperbolic manifolds.",
            "Fenley; Barbot",
        ),
        Premise(
            "ISOTOPY_EXTENSION",
            "Homeomorphisms of M_k preserving N and the filling solid torus are isotopic when their "
            "restrictions to both pieces are (Alexander trick on the solid torus, collar isotopy extension).",
            "Alexander trick; isotopy extension",
        ),
    )
}

CLASS_NAMES = ("f0", "f1", "f2", "f3")
SYMMETRY_NAMES = ("g0", "g1", "g2", "g3")
SYMMETRY_OF = {"f0": "g0", "f1": "g1", "f2": "g2", "f3": "g3"}


# ---------------------------------------------------------------- checks


def _monodromy(inputs: dict) -> IntMatrix2:
    return IntMatrix2.from_json(inputs["monodromy"])


@lru_cache(maxsize=8)
def _normalizer_tables(A: IntMatrix2, bound: int):
    G = quotient_group(enumerate_symmetries(A, bound), A)
    return G, orientation_preserving_subgroup(G)


def _check_normalizer_quotient(inputs: dict) -> dict:
    G, H = _normalizer_tables(_monodromy(inputs), int(inputs["bound"]))
    return {
        "order": G.order,
        "identification": G.identification,
        "abelian": G.is_abelian(),
        "order_profile": list(G.order_profile),
        "orientation_reversing": sum(1 for el in G.elements if el.orientation_sign == -1),
        "orientation_preserving": H.to_json(),
        "pass": G.identification == "D4" and H.identification == "Z2+Z2",
    }


def _check_klein_relations(inputs: dict) -> dict:
    rel = klein_relations(A=_monodromy(inputs))
    ok = all(v for group in rel.values() for v in group.values())
    return {**rel, "pass": ok}


def _check_slope_census(inputs: dict) -> dict:
    A, k = _monodromy(inputs), int(inputs["k"])
    G, H = _normalizer_tables(A, int(inputs["bound"]))
    rows = []
    for el in G.elements:
        S = el.representative
        rows.append(
            {
                "coset": el.coset.to_json(),
                "label": el.label,
                "image": slope_image(S, k).to_json(),
                "extends": extends_to_filling(S, k),
                "orientation_sign": el.orientation_sign,
            }
        )
    extending = [r for r in rows if r["extends"]]
    g4 = standard_symmetry("g4", A)
    return {
        "classes": rows,
        "extending_count": len(extending),
        "g4_image": slope_image(g4, k).to_json(),
        "pass": len(extending) == H.order == 4
        and all(r["extends"] == (r["orientation_sign"] == 1) for r in rows)
        and slope_image(g4, k) == CurveClass(1, -k),
    }


def _check_filling_homology(inputs: dict) -> dict:
    A, k = _monodromy(inputs), int(inputs["k"])
    h1 = h1_filling(k, A)
    fiber = exterior_class(CurveClass(1, k), A).value
    residue = fiber % h1.order if h1.order else fiber
    longitude = exterior_class(CurveClass(1, 0), A).value
    meridian = exterior_class(CurveClass(0, 1), A).value
    return {
        "h1_exterior": h1_mapping_torus(A).to_json(),
        "h1_filling": h1.to_json(),
        "longitude": longitude,
        "meridian": meridian,
        "fiber_residue": residue,
        "pass": h1.rank == 0 and h1.order == abs(k) and residue == 0 and longitude == 0 and meridian == 1,
    }


def _check_boundary(inputs: dict) -> dict:
    k = int(inputs["k"])
    field_ = BoundaryField(float(inputs["amplitude"]))
    report = transversality_report(build_transverse_curve(k, field_), field_, int(inputs["samples"]))
    pinch = pinch_check(k, monodromy=_monodromy(inputs))
    statuses = {e.symmetry: e.status for e in pinch.entries}
    return {
        "class": list(report.curve_class),
        "margin": real(report.margin),
        "lipschitz_slack": real(report.lipschitz_slack),
        "certified": report.certified,
        "pinch": statuses,
        "pass": report.certified
        and report.margin > 0.01
        and statuses == {"g0": "preserved", "g1": "negated", "g2": "preserved", "g3": "negated", "g4": "mismatch"},
    }


def _check_mapping_torus(inputs: dict) -> dict:
    A = _monodromy(inputs)
    omega = orbit_of(A, RationalVec2(0, 0))
    w = fiber_winding(holonomy_class(A, omega))
    images = {n: fiber_winding(holonomy_class(A, apply_symmetry(standard_symmetry(n, A), omega))) for n in SYMMETRY_NAMES}
    h1 = h1_mapping_torus(A)
    return {
        "h1_W": h1.to_json(),
        "omega_winding": w,
        "omega_image_winding": images,
        "pass": h1.rank == 1 and not h1.torsion and w == 1 and images == {"g0": 1, "g1": -1, "g2": 1, "g3": -1},
    }


def _check_strip_model(inputs: dict) -> dict:
    rng = random.Random(int(inputs["seed"]))
    pts = [random_strip_point(rng) for _ in range(int(inputs["points"]))]
    agree = all(eta(p) == eta_geometric(p) for p in pts)
    fixed_free = all(eta(p) != p for p in pts)
    tower = int(inputs["tower"])
    distinct = all(len({eta_power(p, 2 * j) for j in range(-tower, tower + 1)}) == 2 * tower + 1 for p in pts[:20])
    # eta^(2(2j+1)) never returns a point: the parity obstruction for f1, f3.
    odd_double = all(eta_power(p, 2 * (2 * j + 1)) != p for p in pts[:20] for j in range(-tower, tower + 1))
    return {
        "eta_agrees": agree,
        "fixed_point_free": fixed_free,
        "tower_distinct": distinct,
        "odd_double_moves": odd_double,
        "pass": agree and fixed_free and distinct and odd_double,
    }


def _check_tags(inputs: dict) -> dict:
    A = _monodromy(inputs)
    # f_i reverses the flow exactly when eps = -1; eta also reverses it
    # (X_t -> X_-t), so eta.f_i preserves the flow direction again.
    tags = {f: SELF if standard_symmetry(g, A).eps == 1 else ETA_COMPOSED for f, g in SYMMETRY_OF.items()}
    return {"tags": tags, "pass": tags == {"f0": SELF, "f1": ETA_COMPOSED, "f2": SELF, "f3": ETA_COMPOSED}}


CHECKS: dict[str, Callable[[dict], dict]] = {
    "normalizer_quotient": _check_normalizer_quotient,
    "klein_relations": _check_klein_relations,
    "slope_census": _check_slope_census,
    "filling_homology": _check_filling_homology,
    "boundary_transversality": _check_boundary,
    "mapping_torus_homology": _check_mapping_torus,
    "strip_model": _check_strip_model,
    "class_tags": _check_tags,
}


def _check_inputs(k: int, A: IntMatrix2, samples: int) -> dict[str, dict]:
    m = A.to_json()
    return {
        "normalizer_quotient": {"monodromy": m, "bound": 3},
        "klein_relations": {"monodromy": m},
        "slope_census": {"monodromy": m, "bound": 3, "k": k},
        "filling_homology": {"monodromy": m, "k": k},
        "boundary_transversality": {"monodromy": m, "k": k, "amplitude": 0.15, "samples": samples},
        "mapping_torus_homology": {"monodromy": m},
        "strip_model": {"seed": 0, "points": 200, "tower": 10},
        "class_tags": {"monodromy": m},
    }


@dataclass(frozen=True)
class CheckRecord:
    id: str
    inputs: dict
    input_hash: str
    result: dict

    @property
    def passed(self) -> bool:
        return bool(self.result.get("pass"))

    def to_json(self) -> dict:
        return {"id": self.id, "inputs": self.inputs, "input_hash": self.input_hash, "result": self.result}

    @classmethod
    def from_json(cls, data: dict) -> CheckRecord:
        return cls(data["id"], data["inputs"], data["input_hash"], data["result"])


def run_check(check_id: str, inputs: dict) -> CheckRecord:
    return CheckRecord(check_id, inputs, digest(inputs), CHECKS[check_id](inputs))


# ------------------------------------------------------------- witnesses


@dataclass(frozen=True)
class Witness:
    label: str
    kind: str
    data: dict

    def to_json(self) -> dict:
        return {"label": self.label, "kind": self.kind, "data": self.data}

    @classmethod
    def from_json(cls, data: dict) -> Witness:
        return cls(data["label"], data["kind"], data["data"])


def nontriviality_witness(i: int, A: IntMatrix2 = CAT_MAP) -> Witness | None:
    """Finite data showing f_i is not isotopic to the identity (None for f0)."""
    if i not in (0, 1, 2, 3):
        raise BadIndex(f"class index {i} not in 0..3")
    if i == 0:
        return None
    g = standard_symmetry(SYMMETRY_OF[CLASS_NAMES[i]], A)
    omega = orbit_of(A, RationalVec2(0, 0))
    omega_image = apply_symmetry(g, omega)
    if i == 2:
        beta1 = orbit_of(A, RationalVec2("1/4", 0))
        beta2 = orbit_of(A, RationalVec2("3/4", 0))
        image = apply_symmetry(g, beta1)
        search = conjugacy_search(A, holonomy_class(A, beta1), holonomy_class(A, beta2))
        data = {
            "monodromy": A.to_json(),
            "symmetry": g.to_json(),
            "beta1": beta1.to_json(),
            "beta2": beta2.to_json(),
            "image_of_beta1": image.to_json(),
            "class_beta1": holonomy_class(A, beta1).to_json(),
            "class_beta2": holonomy_class(A, beta2).to_json(),
            "freely_homotopic": search.homotopic,
            "search": search.to_json(),
            "omega_image": omega_image.to_json(),
            "premises": ["BG_THEOREM", "FIX_OMEGA", "ETA_ISOTOPIC_ID", "ETA_TOWER", "HOMOTOPY_IMPLIES_ISOTOPY"],
            "argument": [
                "if f2 were isotopic to id, some f2 eta^(-2j) would preserve every orbit",
                "f2 fixes omega with its orientation and the eta^(2j)(omega) are distinct, so j = 0",
                "then f2 preserves every periodic orbit, but f2 maps beta1 onto beta2",
                "beta1 and beta2 are distinct orbits, not even freely homotopic",
            ],
        }
        return Witness(CLASS_NAMES[i], "periodic-orbit-pair", data)
    data = {
        "monodromy": A.to_json(),
        "symmetry": g.to_json(),
        "omega": omega.to_json(),
        "omega_image": omega_image.to_json(),
        "winding_before": fiber_winding(holonomy_class(A, omega)),
        "winding_after": fiber_winding(holonomy_class(A, omega_image)),
        "boundary_action": [g.B.det(), g.eps],
        "premises": ["BG_THEOREM", "ETA_ISOTOPIC_ID", "ETA_TOWER"],
        "argument": [
            f"{CLASS_NAMES[i]} reverses omega; if isotopic to id, eta^(2j+1) {CLASS_NAMES[i]} fixes omega",
            "so eta^(2j+1)(omega) = omega^-1 and eta^(2(2j+1))(omega) = omega",
            "2(2j+1) is never zero, so the tower of distinct eta^(2i)(omega) is contradicted",
        ],
    }
    return Witness(CLASS_NAMES[i], "orientation-reversal", data)


def verify_witness(w: Witness) -> bool:
    """Re-derive every claim in the witness from its own stored objects."""
    d = w.data
    try:
        A = IntMatrix2.from_json(d["monodromy"])
        g = standard_symmetry(d["symmetry"]["label"], A)
        if g.B != IntMatrix2.from_json(d["symmetry"]["B"]) or g.eps != d["symmetry"]["eps"]:
            return False
        if w.kind == "periodic-orbit-pair":
            beta1 = PeriodicOrbit.from_json(d["beta1"])
            beta2 = PeriodicOrbit.from_json(d["beta2"])
            if orbit_of(A, beta1.seed) != beta1 or orbit_of(A, beta2.seed) != beta2:
                return False
            image = apply_symmetry(g, beta1)
            c1, c2 = holonomy_class(A, beta1), holonomy_class(A, beta2)
            search = conjugacy_search(A, c1, c2)
            omega = orbit_of(A, RationalVec2(0, 0))
            return (
                image == beta2
                and image == PeriodicOrbit.from_json(d["image_of_beta1"])
                and beta1.point_set() != beta2.point_set()
                and search.homotopic is False
                and d["freely_homotopic"] is False
                and c1.to_json() == d["class_beta1"]
                and c2.to_json() == d["class_beta2"]
                and apply_symmetry(g, omega) == omega
                and PeriodicOrbit.from_json(d["omega_image"]) == omega
            )
        if w.kind == "orientation-reversal":
            omega = PeriodicOrbit.from_json(d["omega"])
            if orbit_of(A, omega.seed) != omega or omega.period != 1:
                return False
            image = apply_symmetry(g, omega)
            return (
                image == PeriodicOrbit.from_json(d["omega_image"])
                and image.orientation == -1
                and fiber_winding(holonomy_class(A, omega)) == d["winding_before"] == 1
                and fiber_winding(holonomy_class(A, image)) == d["winding_after"] == -1
                and [g.B.det(), g.eps] == d["boundary_action"] == [-1, -1]
            )
    except (KeyError, TypeError, ValueError):
        return False
    return False


# ----------------------------------------------------------- certificate

# Derivation: each conclusion lists the checks and premises it rests on.
DERIVATION = (
    {
        "claim": "Mod+(N) = {[h0],[h1],[h2],[h3]} is the Klein four-group",
        "checks": ["normalizer_quotient", "klein_relations"],
        "premises": ["MODN_IS_D4", "FIG8_EXTERIOR"],
    },
    {
        "claim": "every self-homeomorphism of M_k is orientation preserving up to isotopy",
        "checks": ["slope_census", "filling_homology"],
        "premises": ["HYPERBOLIC_K", "FIX_OMEGA"],
    },
    {
        "claim": "every self-homeomorphism of M_k is isotopic to some f_i",
        "checks": ["slope_census", "boundary_transversality"],
        "premises": ["FIX_OMEGA", "MODN_IS_D4", "ISOTOPY_EXTENSION"],
    },
    {
        "claim": "[f_i]^2 = [f0] and [f_i][f_j] = [f_j][f_i] = [f_k]",
        "checks": ["klein_relations"],
        "premises": ["ISOTOPY_EXTENSION"],
    },
    {
        "claim": "f1, f2, f3 are not isotopic to the identity",
        "checks": ["mapping_torus_homology", "strip_model"],
        "witnesses": ["f1", "f2", "f3"],
        "premises": ["BG_THEOREM", "FIX_OMEGA", "ETA_ISOTOPIC_ID", "ETA_TOWER", "HOMOTOPY_IMPLIES_ISOTOPY"],
    },
    {
        "claim": "f0, f2 and eta.f1, eta.f3 are self orbit equivalences representing the four classes",
        "checks": ["class_tags", "strip_model"],
        "premises": ["ETA_ISOTOPIC_ID"],
    },
    {
        "claim": "Mod(M_k) is isomorphic to Z2+Z2, each class represented by a self orbit equivalence",
        "checks": list(CHECKS),
        "premises": sorted(PREMISES),
    },
)

REQUIRED_PREMISES = frozenset(p for step in DERIVATION for p in step["premises"])


@dataclass
class Certificate:
    k: int
    monodromy: IntMatrix2
    group: dict
    class_tags: dict[str, str]
    witnesses: list[Witness]
    premises: list[Premise]
    checks: list[CheckRecord]
    conclusions: list[dict] = field(default_factory=list)
    input_hash: str = ""

    @property
    def valid(self) -> bool:
        return all(c.passed for c in self.checks) and all(verify_witness(w) for w in self.witnesses)

    def header(self) -> dict:
        return {"k": self.k, "monodromy": self.monodromy.to_json(), "premises": sorted(p.id for p in self.premises)}

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "k": self.k,
            "monodromy": self.monodromy.to_json(),
            "input_hash": self.input_hash,
            "group": self.group,
            "class_tags": self.class_tags,
            "witnesses": [w.to_json() for w in self.witnesses],
            "premises": [p.to_json() for p in self.premises],
            "checks": [c.to_json() for c in self.checks],
            "conclusions": self.conclusions,
            "valid": self.valid,
        }

    @classmethod
    def from_json(cls, data: dict) -> Certificate:
        if data.get("schema") != SCHEMA_VERSION:
            raise ValueError(f"unsupported certificate schema {data.get('schema')!r}")
        return cls(
            k=int(data["k"]),
            monodromy=IntMatrix2.from_json(data["monodromy"]),
            group=data["group"],
            class_tags=dict(data["class_tags"]),
            witnesses=[Witness.from_json(w) for w in data["witnesses"]],
            premises=[Premise(**p) for p in data["premises"]],
            checks=[CheckRecord.from_json(c) for c in data["checks"]],
            conclusions=list(data.get("conclusions", [])),
            input_hash=data["input_hash"],
        )


def build_certificate(
    k: int,
    premises: Iterable[str] | None = None,
    monodromy: IntMatrix2 = CAT_MAP,
    samples: int = 2000,
) -> Certificate:
    """Run every check for the k-filling and assemble the certificate.

    Refuses (MissingPremise) when any premise the derivation uses is
    withheld, and raises PremiseViolated when |k| <= 4.
    """
    given = set(PREMISES) if premises is None else set(premises)
    unknown = given - set(PREMISES)
    if unknown:
        raise ValueError(f"unknown premises {sorted(unknown)}")
    missing = REQUIRED_PREMISES - given
    if missing:
        raise MissingPremise(missing)
    if abs(k) <= 4:
        raise PremiseViolated("HYPERBOLIC_K", f"HYPERBOLIC_K requires |k| > 4, got k = {k}")

    records = []
    for check_id, inputs in _check_inputs(k, monodromy, samples).items():
        rec = run_check(check_id, inputs)
        if not rec.passed:
            raise CheckFailed(check_id)
        records.append(rec)

    witnesses = [nontriviality_witness(i, monodromy) for i in (1, 2, 3)]
    for w in witnesses:
        if not verify_witness(w):
            raise CheckFailed(f"witness_{w.label}")

    group = records[0].result["orientation_preserving"]
    tags = next(r for r in records if r.id == "class_tags").result["tags"]
    cert = Certificate(
        k=k,
        monodromy=monodromy,
        group=group,
        class_tags=tags,
        witnesses=witnesses,
        premises=[PREMISES[p] for p in sorted(given)],
        checks=records,
        conclusions=[dict(step) for step in DERIVATION],
    )
    cert.input_hash = digest(cert.header())
    return cert


def replay(cert: Certificate | dict) -> bool:
    """Re-execute every recorded check and witness; True iff all reproduce.

    Raises StaleHash when stored inputs no longer match their hashes.
    """
    if isinstance(cert, dict):
        cert = Certificate.from_json(cert)
    if digest(cert.header()) != cert.input_hash:
        raise StaleHash("certificate header does not match its input hash")
    expected_inputs = _check_inputs(cert.k, cert.monodromy, _recorded_samples(cert))
    for rec in cert.checks:
        if digest(rec.inputs) != rec.input_hash:
            raise StaleHash(f"inputs of check {rec.id} do not match their hash")
        if rec.inputs != expected_inputs.get(rec.id):
            raise StaleHash(f"check {rec.id} was run on inputs other than the certificate's")
    if {rec.id for rec in cert.checks} != set(CHECKS):
        return False
    if REQUIRED_PREMISES - {p.id for p in cert.premises}:
        return False
    for rec in cert.checks:
        if CHECKS[rec.id](rec.inputs) != rec.result or not rec.passed:
            return False
    if sorted(w.label for w in cert.witnesses) != ["f1", "f2", "f3"]:
        return False
    if not all(verify_witness(w) for w in cert.witnesses):
        return False
    quotient = next(r for r in cert.checks if r.id == "normalizer_quotient")
    tags = next(r for r in cert.checks if r.id == "class_tags")
    return cert.group == quotient.result["orientation_preserving"] and cert.class_tags == tags.result["tags"]


def _recorded_samples(cert: Certificate) -> int:
    for rec in cert.checks:
        if rec.id == "boundary_transversality":
            return int(rec.inputs["samples"])
    return 2000
