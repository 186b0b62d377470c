"""Command-line front end.

Every subcommand builds a JSON payload and, where it has a natural table, a
list of CSV rows.  Output is deterministic for fixed inputs: dict keys are
sorted, rationals are "p/q" strings and reals carry a fixed number of
significant digits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import __version__
from .blowup_boundary import BoundaryField, build_transverse_curve, curve_samples, pinch_check, transversality_report
from .certificate import Certificate, build_certificate, replay
from .config import FORMATS, Config, ConfigError, load_config
from .errors import AnosovKitError, NotHyperbolic, PremiseViolated
from .exact_core import format_rational
from .orbit_space import DeckModel, demo_rows, deck_fixed_orbits
from .serialize import dumps, real
from .sol_symmetry import (
    enumerate_symmetries,
    klein_relations,
    orientation_preserving_subgroup,
    quotient_group,
    standard_symmetry,
)
from .surgery_homology import (
    CurveClass,
    exterior_class,
    extends_to_filling,
    h1_exterior,
    h1_filling,
    h1_mapping_torus,
    slope_image,
)
from .toral_dynamics import (
    apply_symmetry,
    brute_force_fixed_points,
    conjugacy_search,
    enumerate_orbits,
    fixed_point_count,
    holonomy_class,
    orbit_label,
    orbit_of,
    parse_point,
    periodic_points,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DYNAMICS = {"orbits", "nielsen", "symmetries", "surgery-check", "certificate"}


class Result:
    def __init__(self, payload: dict, rows: list[dict] | None = None, code: int = EXIT_OK):
        self.payload = payload
        self.rows = rows
        self.code = code


# ------------------------------------------------------------- commands


def cmd_orbits(args, cfg: Config) -> Result:
    A, n = cfg.monodromy, args.period
    points = periodic_points(A, n)
    orbits = enumerate_orbits(A, n, exact_period=True)
    payload = {
        "monodromy": A.to_json(),
        "period": n,
        "fixed_point_count": fixed_point_count(A, n),
        "fixed_points": [p.to_json() for p in points],
        "orbit_count": len(orbits),
        "orbits": [
            {"points": o.to_json()["points"], "period": o.period, "class": holonomy_class(A, o).to_json()}
            for o in orbits
        ],
    }
    if args.brute_force:
        payload["brute_force_count"] = len(brute_force_fixed_points(A, n))
    rows = [
        {"orbit": i, "period": o.period, "step": s, "x": format_rational(p.x), "y": format_rational(p.y)}
        for i, o in enumerate(orbits)
        for s, p in enumerate(o.points)
    ]
    return Result(payload, rows)


def cmd_nielsen(args, cfg: Config) -> Result:
    A = cfg.monodromy
    o1, o2 = orbit_of(A, args.seeds[0]), orbit_of(A, args.seeds[1])
    c1, c2 = holonomy_class(A, o1), holonomy_class(A, o2)
    search = conjugacy_search(A, c1, c2)
    payload = {
        "monodromy": A.to_json(),
        "orbits": [o1.to_json(), o2.to_json()],
        "labels": [orbit_label(o1), orbit_label(o2)],
        "classes": [c1.to_json(), c2.to_json()],
        "freely_homotopic": search.homotopic,
        "search": search.to_json(),
    }
    try:
        g2 = standard_symmetry("g2", A)
    except AnosovKitError:
        g2 = None
    if g2 is not None:
        payload["g2_image_of_first"] = apply_symmetry(g2, o1).to_json()
        payload["g2_maps_first_to_second"] = apply_symmetry(g2, o1) == o2
    rows = [
        {"m": a["m"], "difference": " ".join(a["difference"]), "in_lattice": a["solution"] is not None}
        for a in search.attempts
    ]
    return Result(payload, rows)


def cmd_symmetries(args, cfg: Config) -> Result:
    A = cfg.monodromy
    found = enumerate_symmetries(A, args.bound)
    G = quotient_group(found, A)
    H = orientation_preserving_subgroup(G)
    payload = {
        "monodromy": A.to_json(),
        "bound": args.bound,
        "symmetry_count": len(found),
        "group": G.to_json(),
        "orientation_preserving": H.to_json(),
        "klein_relations": klein_relations(A=A),
    }
    rows = [
        {
            "index": i,
            "label": el.label or "",
            "coset": repr(el.coset),
            "eps": el.eps,
            "orientation_sign": el.orientation_sign,
            "order": G.element_order(i),
        }
        for i, el in enumerate(G.elements)
    ]
    return Result(payload, rows)


def cmd_homology(args, cfg: Config) -> Result:
    A, k = cfg.monodromy, cfg.k
    l_verdict = exterior_class(CurveClass(1, 0), A)
    m_verdict = exterior_class(CurveClass(0, 1), A)
    census = []
    if k != 0:
        for name in ("g0", "g1", "g2", "g3", "g4"):
            try:
                S = standard_symmetry(name, A)
            except AnosovKitError:
                continue
            census.append({"symmetry": name, "image": slope_image(S, k).to_json(), "extends": extends_to_filling(S, k)})
    payload = {
        "monodromy": A.to_json(),
        "k": k,
        "h1_W": h1_mapping_torus(A).to_json(),
        "h1_N": h1_exterior(A).to_json(),
        "longitude": l_verdict.to_json(),
        "meridian": m_verdict.to_json(),
        "h1_filling": h1_filling(k, A).to_json(),
        "h1_filling_text": str(h1_filling(k, A)),
        "slope_census": census,
    }
    rows = [{"symmetry": c["symmetry"], "l": c["image"][0], "m": c["image"][1], "extends": c["extends"]} for c in census]
    return Result(payload, rows)


def cmd_orbit_space(args, cfg: Config) -> Result:
    rows = demo_rows(args.demo, cfg.seed)
    payload = {"seed": cfg.seed, "points": rows}
    if args.deck_window is not None:
        D = DeckModel(0, "1/4")
        payload["deck_fixed_orbits"] = [
            {"point": p.to_json(), "class": label} for p, label in deck_fixed_orbits(D, args.deck_window)
        ]
    return Result(payload, rows)


def cmd_surgery_check(args, cfg: Config) -> Result:
    k, digits = cfg.k, cfg.precision
    field = BoundaryField()
    curve = build_transverse_curve(k, field)
    report = transversality_report(curve, field, cfg.samples)
    payload = {
        "k": k,
        "class": list(report.curve_class),
        "class_matches": report.class_matches,
        "margin": real(report.margin, digits),
        "samples": report.samples,
        "lipschitz_slack": real(report.lipschitz_slack, digits),
        "certified_lower_bound": real(report.certified_lower_bound, digits),
        "certified": report.certified,
        "curve": curve.to_json(),
    }
    if k != 0:
        payload["pinch"] = pinch_check(k, monodromy=cfg.monodromy).to_json()
    samples = [{"theta": real(x, digits), "t": real(y, digits)} for x, y in curve_samples(curve)]
    if args.csv:
        _write_csv(Path(args.csv), samples)
    code = EXIT_OK if report.certified and report.margin > 0.01 else EXIT_FAIL
    return Result(payload, samples, code)


def cmd_certificate(args, cfg: Config) -> Result:
    cert = build_certificate(cfg.k, monodromy=cfg.monodromy, samples=cfg.samples)
    payload = cert.to_json()
    if args.out:
        Path(args.out).write_text(dumps(payload))
    rows = [{"check": c.id, "input_hash": c.input_hash, "pass": c.passed} for c in cert.checks]
    return Result(payload, rows, EXIT_OK if cert.valid else EXIT_FAIL)


def cmd_replay(args, cfg: Config) -> Result:
    try:
        data = json.loads(Path(args.input).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"--in: cannot read certificate: {exc}") from exc
    try:
        cert = Certificate.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"--in: malformed certificate: {exc}") from exc
    ok = replay(cert)
    payload = {"k": cert.k, "input_hash": cert.input_hash, "replayed": ok}
    return Result(payload, [payload], EXIT_OK if ok else EXIT_FAIL)


COMMANDS = {
    "orbits": cmd_orbits,
    "nielsen": cmd_nielsen,
    "symmetries": cmd_symmetries,
    "homology": cmd_homology,
    "orbit-space": cmd_orbit_space,
    "surgery-check": cmd_surgery_check,
    "certificate": cmd_certificate,
    "replay": cmd_replay,
}


# --------------------------------------------------------------- parsing


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _point(text: str):
    try:
        return parse_point(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"expected a point like 1/4,0, got {text!r}") from exc


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    # Global flags are accepted before or after the subcommand.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON config file")
    common.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="anosov-kit", parents=[common], description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("orbits", parents=[common], help="periodic points and orbits of A^n")
    p.add_argument("--period", type=_positive, required=True)
    p.add_argument("--brute-force", action="store_true", help="also count fixed points by lattice scan")

    p = sub.add_parser("nielsen", parents=[common], help="free homotopy test for two periodic orbits")
    p.add_argument("--seeds", nargs=2, type=_point, default=[_point("1/4,0"), _point("3/4,0")], metavar="X,Y")

    p = sub.add_parser("symmetries", parents=[common], help="normaliser quotient and its Cayley table")
    p.add_argument("--bound", type=_positive, default=3)

    p = sub.add_parser("homology", parents=[common], help="H1 of W, N and the k-filling")
    p.add_argument("--k", type=int)

    p = sub.add_parser("orbit-space", parents=[common], help="sample the strip model")
    p.add_argument("--demo", type=_positive, required=True, metavar="N")
    p.add_argument("--deck-window", type=_nonnegative)

    p = sub.add_parser("surgery-check", parents=[common], help="transverse boundary curve for the k-filling")
    p.add_argument("--k", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--csv", metavar="PATH", help="write curve samples for plotting")

    p = sub.add_parser("certificate", parents=[common], help="build the mapping class group certificate")
    p.add_argument("--k", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("replay", parents=[common], help="re-run a stored certificate")
    p.add_argument("--in", dest="input", required=True, metavar="PATH")
    return parser


# ---------------------------------------------------------------- output


def _write_csv(target, rows: list[dict]) -> None:
    if isinstance(target, Path):
        with target.open("w", newline="") as fh:
            _write_csv(fh, rows)
        return
    if not rows:
        return
    writer = csv.DictWriter(target, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)


def render(result: Result, fmt: str) -> str:
    if fmt == "json":
        return dumps(result.payload)
    buf = io.StringIO()
    _write_csv(buf, result.rows or [])
    return buf.getvalue()


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(
            getattr(args, "config", None),
            k=getattr(args, "k", None),
            samples=getattr(args, "samples", None),
            format=getattr(args, "format", None),
        )
        if args.command in DYNAMICS:
            cfg.require_hyperbolic()
        result = COMMANDS[args.command](args, cfg)
    except (ConfigError, NotHyperbolic) as exc:
        print(f"anosov-kit: error: {exc}", file=stderr)
        return EXIT_USAGE
    except PremiseViolated as exc:
        print(f"anosov-kit: PremiseViolated: {exc}", file=stderr)
        return EXIT_FAIL
    except AnosovKitError as exc:
        print(f"anosov-kit: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_FAIL
    stdout.write(render(result, cfg.format))
    return result.code


def main() -> None:
    sys.exit(run())
