"""Command line interface: ``twoquadrics verify | chamber | export``.

Exit codes: 0 when every check passes, 1 on a failed check, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Callable, Sequence

from . import bridge, cones, mcd, verify
from .lattice import Side, make_space
from .planes import all_labels, plane_class
from .weyl import sign_elements, weyl_group

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _check_n(n: int, unsafe: bool, cap: int = verify.SUITE_CAP):
    if n < 2 or n % 2:
        raise UsageError(f"n must be an even integer >= 2, got {n}")
    if n > cap and not unsafe:
        raise UsageError(f"n = {n} exceeds the cap {cap}; pass --unsafe-cap to run anyway")


def _frac(v: Fraction) -> int | str:
    return v.numerator if v.denominator == 1 else str(v)


# ---------------------------------------------------------------------------
# output


def _cell(v) -> str:
    if isinstance(v, (list, tuple)):
        return " ".join(_cell(x) for x in v)
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True)
    return str(v)


def to_csv(rows: list[dict]) -> str:
    fields: list[str] = []
    for r in rows:
        for k in r:
            if k not in fields:
                fields.append(k)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _cell(v) for k, v in r.items()})
    return buf.getvalue()


def to_text(rows: list[dict]) -> str:
    return "\n".join("  ".join(f"{k}={_cell(v)}" for k, v in r.items()) for r in rows) + "\n"


def emit(payload: dict, rows: list[dict], fmt: str, out: str | None):
    if fmt == "json":
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        text = to_csv(rows)
    else:
        text = to_text(rows)
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    _check_n(args.n, args.unsafe_cap)
    report = verify.run_suite(args.n, args.suite, unsafe=args.unsafe_cap)
    payload = report.to_json()
    rows = [c.to_json() for c in report.checks]
    if args.format == "text":
        lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.check_id}  ({c.anchor})"
                 + ("" if c.passed else f"  expected={c.expected!r} computed={c.computed!r}")
                 for c in report.checks]
        lines.append(f"{sum(c.passed for c in report.checks)}/{len(report.checks)} checks passed "
                     f"for suite {report.suite} at n={report.n} in {report.seconds:.1f}s")
        text = "\n".join(lines) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        emit(payload, rows, args.format, args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# chamber


def _parse_coords(values: Sequence[str]) -> list[Fraction]:
    out = []
    for v in values:
        for part in v.replace(",", " ").split():
            try:
                out.append(Fraction(part))
            except ValueError as e:
                raise UsageError(f"not a rational number: {part!r}") from e
    return out


def _wall_entry(w: mcd.WallDescriptor, alpha) -> dict:
    val = w.value(alpha)
    out = mcd.classify_wall(w).to_json()
    if not w.is_box:
        # which side of the wall the point lies on; "on" for walls through it
        out["side"] = "on" if val == 0 else ("above" if val > 0 else "below")
    norm2 = 1 if w.is_box else w.n + 3
    out["offset"] = _frac(val)
    out["distance_squared"] = _frac(val * val / norm2)
    return out


def chamber_report(n: int, coords: Sequence[Fraction], basis: str, nearest: int = 5) -> dict:
    X = make_space(n, Side.X)
    if len(coords) != X.rank:
        raise UsageError(f"expected {X.rank} coordinates at n = {n}, got {len(coords)}")
    x = X.vector(coords, basis)
    report = {"schema": SCHEMA, "n": n, "class": {"basis": basis, "coords": [_frac(c) for c in coords]},
              "HE": [_frac(c) for c in x.to("HE").coords]}
    try:
        ch = mcd.chamber_of(x)
    except mcd.NotEffective:
        report.update(effective=False, region="not effective")
        return report
    alpha = mcd.radial_project(x)
    named = mcd.named_cones(n)
    N = n + 3
    box = [w for w in mcd.box_walls(n) if w.value(alpha) == 0]
    on = ch.walls_containing()
    if alpha in set(cones.demihypercube(N).vertices):
        region = "vertex of Delta"
    elif not named.delta.polytope.in_interior(alpha):
        region = "boundary of Delta"
    elif all(cones.evaluate_inequality(h, alpha) > 0 for h in named.fano.declared):
        region = "Fano chamber"
    elif all(cones.evaluate_inequality(h, alpha) > 0 for h in named.nef.declared):
        region = "Nef chamber"
    elif on:
        region = "wall"
    else:
        region = "chamber"
    off = [w for w in mcd.arrangement(n) + mcd.box_walls(n) if w.value(alpha) != 0]
    off.sort(key=lambda w: (abs(w.value(alpha)) ** 2 / (1 if w.is_box else N), w.sort_key()))
    report.update(
        effective=True,
        region=region,
        alpha=[_frac(a) for a in alpha],
        movable=named.mov.satisfies_declared(alpha),
        nef=named.nef.satisfies_declared(alpha),
        signs=list(ch.signs),
        walls_containing=[_wall_entry(w, alpha) for w in on + box],
        nearest_walls=[_wall_entry(w, alpha) for w in off[:nearest]],
    )
    return report


def cmd_chamber(args) -> int:
    _check_n(args.n, args.unsafe_cap)
    coords = _parse_coords(args.coords)
    report = chamber_report(args.n, coords, args.basis, args.nearest)
    rows = [{"wall": json.dumps({k: v for k, v in w.items() if k not in ("loci",)}, sort_keys=True)}
            for w in report.get("walls_containing", []) + report.get("nearest_walls", [])]
    if args.format == "json":
        emit(report, rows, "json", args.out)
    else:
        head = {"region": report["region"], "effective": report["effective"]}
        if report["effective"]:
            head["signs"] = report["signs"]
        emit(report, [head] + rows, args.format, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# export


def _export_cone(cone: cones.RationalCone) -> tuple[dict, list[dict]]:
    rays = bridge.ray_inventory(cone) if cone.space is not None and cone.space.side is Side.Z else \
        [{"ray": list(r)} for r in cone.rays]
    payload = cone.to_json()
    payload["rays"] = rays
    rows = [{"kind": "ray", **r} for r in rays] + [{"kind": "facet", "ray": list(f)} for f in cone.facets]
    return payload, rows


def export_E(n, unsafe):
    return _export_cone(cones.E_cone(n))


def export_E_dual(n, unsafe):
    return _export_cone(cones.E_dual_cone(n))


def export_delta(n, unsafe):
    P = cones.demihypercube(n + 3)
    rows = ([{"kind": "vertex", "value": [str(c) for c in v]} for v in P.vertices]
            + [{"kind": "inequality", "value": list(h)} for h in P.inequalities])
    return P.to_json(), rows


def export_G(n, unsafe):
    G = bridge.G_cones(n, with_movable=n <= 4 or unsafe)
    payload, rows = {"n": n}, []
    for name, cone in G.items():
        if cone is None:
            continue
        p, r = _export_cone(cone)
        payload[name] = p
        rows.extend({"cone": name, **x} for x in r)
    return payload, rows


def export_planes(n, unsafe):
    rows = [{"label": L.to_json(), "eps": [_frac(c) for c in plane_class(L).canonical]} for L in all_labels(n)]
    return {"n": n, "planes": rows}, rows


def export_arrangement(n, unsafe):
    rows = [w.to_json() for w in mcd.arrangement(n)]
    return {"n": n, "walls": rows}, rows


def export_walls(n, unsafe):
    rows = [mcd.classify_wall(w).to_json() for w in mcd.box_walls(n) + mcd.arrangement(n)]
    return {"n": n, "walls": rows}, rows


def export_named(n, unsafe):
    payload, rows = {"n": n}, []
    for p in mcd.named_cones(n):
        entry = {"declared": [list(h) for h in p.declared]}
        if n <= 4 or unsafe:
            entry["vertices"] = [[str(c) for c in v] for v in p.polytope.vertices]
            entry["facets"] = [list(h) for h in p.polytope.inequalities]
        payload[p.name] = entry
        rows.extend({"polytope": p.name, "inequality": list(h)} for h in p.declared)
    return payload, rows


def export_factorization(n, unsafe):
    fac = mcd.factorization(n)
    rows = [{"step": s.step, "locus": str(j), "dim": j.dim, "walls": [repr(w) for w in s.walls]}
            for s in fac.steps for j in s.flipped]
    return fac.to_json(), rows


def export_weyl_generators(n, unsafe):
    N = n + 3
    elems = sorted(sign_elements(N), key=lambda w: (len(w.flips), sorted(w.flips)))
    gens = [g.to_json() for g in weyl_group(N).generators]
    rows = [{"group": "W'", **w.to_json()} for w in elems] + [{"group": "W(D_N) generator", **g} for g in gens]
    return {"n": n, "W_prime": [w.to_json() for w in elems], "W_generators": gens}, rows


def export_h_tilde(n, unsafe):
    from .planes import canonical
    h = bridge.h_tilde(canonical((), n))
    payload = h.to_json()
    rows = [{"row": r, "entries": [_frac(c) for c in row]} for r, row in enumerate(h.matrix)]
    return payload, rows


EXPORTS: dict[str, Callable] = {
    "cones.E": export_E,
    "cones.E_dual": export_E_dual,
    "cones.Delta": export_delta,
    "cones.G": export_G,
    "planes": export_planes,
    "mcd.arrangement": export_arrangement,
    "mcd.walls": export_walls,
    "mcd.named": export_named,
    "factorization": export_factorization,
    "weyl.generators": export_weyl_generators,
    "bridge.h_tilde": export_h_tilde,
}


def cmd_export(args) -> int:
    _check_n(args.n, args.unsafe_cap)
    if args.object not in EXPORTS:
        raise UsageError(f"unknown object {args.object!r}; choose from {', '.join(EXPORTS)}")
    payload, rows = EXPORTS[args.object](args.n, args.unsafe_cap)
    payload = {"schema": SCHEMA, "object": args.object, "n": args.n, "data": payload}
    emit(payload, rows, "json" if args.format == "text" else args.format, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twoquadrics",
                                description="Exact lattice and cone computations for the blow-up of P^n "
                                            "at n+3 points and the variety of m-planes in two quadrics.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats=("json", "csv", "text"), default="text"):
        sp.add_argument("--n", type=int, required=True, help="even dimension n = 2m")
        sp.add_argument("--format", choices=formats, default=default)
        sp.add_argument("--out", help="write to this path instead of stdout")
        sp.add_argument("--unsafe-cap", action="store_true", help="lift the size caps")

    v = sub.add_parser("verify", help="run verification suites")
    common(v)
    v.add_argument("--suite", choices=verify.SUITES + ("all",), default="all")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("chamber", help="locate a divisor class in the chamber decomposition")
    common(c, default="json")
    c.add_argument("--class", dest="coords", nargs="+", required=True,
                   help="coordinates of the class (commas or spaces)")
    c.add_argument("--basis", choices=("HE", "KE", "Keps"), default="HE")
    c.add_argument("--nearest", type=int, default=5, help="number of nearest walls to report")
    c.set_defaults(func=cmd_chamber)

    e = sub.add_parser("export", help="export an object as JSON or CSV")
    common(e, formats=("json", "csv"), default="json")
    e.add_argument("object", help=f"one of: {', '.join(EXPORTS)}")
    e.set_defaults(func=cmd_export)
    return p


def _glue_class(argv: list[str]) -> list[str]:
    """Let ``--class -1,0,...`` through: argparse reads a leading ``-`` as an option."""
    out = []
    it = iter(argv)
    for a in it:
        nxt = None
        if a == "--class":
            nxt = next(it, None)
        if nxt is not None and nxt.startswith("-") and "," in nxt:
            out.append(f"--class={nxt}")
        else:
            out.append(a)
            if nxt is not None:
                out.append(nxt)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = _glue_class(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        print(f"twoquadrics: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
