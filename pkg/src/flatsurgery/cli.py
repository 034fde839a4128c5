"""Command-line entry point: build, analyze, deform, run scenarios, export.

Exit codes: 0 success, 1 validation error, 2 scenario assertion failure,
3 indeterminate (tracing budget exhausted).  Diagnostics go to stderr as JSON.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import sympy

from .cyl import NotPeriodic, cylinder_digraph, horizontal_decomposition
from .develop import BudgetExhausted
from .exactnum import CNum, Scalar, field as make_field
from .homology import per_closure_class
from .scenarios import (arranged_instance, chain_demos, horizontal_star_spec, scenario_free_loops, scenario_pop,
                        scenario_rank2_pants, trichotomy_report)
from .serialize import load_surface, surface_from_json, surface_svg, surface_to_json
from .surface import SurfaceError, topology_report
from .surgery import (PathSpec, StarSumSpec, cylinder_deform, deform_by_loops, make_fully_periodic, rel_deform,
                      schiffer, split_zero_slits, star_connected_sum, twin_path)

EXIT_OK, EXIT_INVALID, EXIT_SCENARIO, EXIT_BUDGET = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INVALID, **extra):
        super().__init__(message)
        self.code = code
        self.extra = extra


def parse_scalar(text: str) -> Scalar:
    """Exact value from strings such as '3/2', '1+sqrt(2)' or 'sqrt(6)/2'."""
    try:
        expr = sympy.nsimplify(sympy.sympify(text, rational=True))
    except (sympy.SympifyError, TypeError, SyntaxError) as exc:
        raise CliError(f"cannot parse number {text!r}") from exc
    terms = sympy.Add.make_args(sympy.expand(expr))
    parts = []
    primes = set()
    for term in terms:
        coeff, rest = term.as_coeff_Mul()
        if rest == 1:
            n = 1
        elif isinstance(rest, sympy.Pow) and rest.exp == sympy.Rational(1, 2) and rest.base.is_Integer:
            n = int(rest.base)
        else:
            raise CliError(f"{text!r} is not a rational combination of square roots")
        if not coeff.is_Rational:
            raise CliError(f"{text!r} is not a rational combination of square roots")
        parts.append((Fraction(int(coeff.p), int(coeff.q)), n))
        primes |= set(sympy.primefactors(n))
    F = make_field(*sorted(primes))
    total = Scalar.zero(F)
    for c, n in parts:
        total = total + (F.sqrt(n) if n > 1 else Scalar.rational(1, F)) * c
    return total


def _assignment(text: str):
    key, sep, val = text.partition("=")
    if not sep:
        raise CliError(f"expected NAME=VALUE, got {text!r}")
    return key.strip(), parse_scalar(val)


def _cylinder_index(dec, name: str) -> int:
    label = name[1:] if name[:1] in "Cc" else name
    if not label.isdigit() or int(label) >= len(dec.cylinders):
        raise CliError(f"unknown cylinder {name!r}", cylinders=[f"C{c.id}" for c in dec.cylinders])
    return int(label)


def _zero_class(s, name: str) -> int:
    label = name[1:] if name[:1] in "Zz" else name
    if not label.isdigit():
        raise CliError(f"unknown zero {name!r}")
    ci = s.singular_class(int(label))
    if ci not in s.zero_classes:
        raise CliError(f"{name!r} is a marked point, not a zero")
    return ci


def _write(path: str, text: str, force: bool) -> None:
    if os.path.exists(path) and not force:
        raise CliError(f"refusing to overwrite {path} (use --force)")
    with open(path, "w") as fh:
        fh.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def _emit_surface(s, args) -> None:
    text = _dump(surface_to_json(s))
    if args.output:
        _write(args.output, text, args.force)
    else:
        sys.stdout.write(text)


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"{path} is not valid JSON: {exc}") from exc


def _load(path: str):
    _read_json(path)  # uniform error for unreadable input
    return load_surface(path)


# ---------------------------------------------------------------------------
# verbs


def cmd_build(args) -> int:
    if args.star:
        spec = StarSumSpec.from_json(_read_json(args.star))
        s = star_connected_sum(spec).surface
    elif args.input:
        s = surface_from_json(_read_json(args.input))
    else:
        raise CliError("build needs --star SPEC or a surface JSON file")
    _emit_surface(s, args)
    return EXIT_OK


def analysis(s) -> dict:
    rep = topology_report(s)
    cl, area, meets = per_closure_class(s)
    return {
        "genus": s.genus,
        "signature": list(rep.signature.orders),
        "area": rep.area.to_json(),
        "area_str": str(rep.area),
        "zeros": [{"zero": z, "cone_angle_2pi": m, "order": o} for z, m, o in rep.zeros],
        "marked_points": rep.n_marked,
        "periods": cl.to_json(area),
        "periods_meet_every_component": meets,
    }


def cmd_analyze(args) -> int:
    sys.stdout.write(_dump(analysis(_load(args.input))))
    return EXIT_OK


def cmd_cylinders(args) -> int:
    s = _load(args.input)
    dec = horizontal_decomposition(s, budget=args.budget)
    dg = cylinder_digraph(dec)
    if args.dot:
        _write(args.dot, dg.to_dot(dec), args.force)
    out = dec.to_json()
    out["digraph"] = dg.to_json()
    sys.stdout.write(_dump(out))
    return EXIT_OK


def cmd_deform(args) -> int:
    s = _load(args.input)
    for item in args.shear or ():
        name, t = _assignment(item)
        dec = horizontal_decomposition(s)
        s = cylinder_deform(s, _cylinder_index(dec, name), t_shear=t, dec=dec)
    for item in args.stretch or ():
        name, t = _assignment(item)
        dec = horizontal_decomposition(s)
        s = cylinder_deform(s, _cylinder_index(dec, name), t_stretch=t, dec=dec)
    for item in args.rel or ():
        name, t = _assignment(item)
        s = rel_deform(s, _zero_class(s, name), t)
    for item in args.split or ():
        name, eps = _assignment(item)
        s = split_zero_slits(s, _zero_class(s, name), eps)
    if args.make_periodic:
        s = make_fully_periodic(s)
    if args.loops:
        spec = _read_json(args.loops)
        try:
            loops = [tuple(int(g) for g in l) for l in spec["loops"]]
            ts = [parse_scalar(str(t)) for t in spec["t"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise CliError(f"loops file needs 'loops' and 't' lists: {exc}") from exc
        s = deform_by_loops(s, loops, ts, mode=spec.get("mode", "increment"))
    _emit_surface(s, args)
    return EXIT_OK


def cmd_schiffer(args) -> int:
    s = _load(args.input)
    data = _read_json(args.path)
    path = PathSpec.from_json(data)
    twin = twin_path(s, path)
    out, inverse = schiffer(s, path)
    _emit_surface(out, args)
    sys.stderr.write(_dump({"twin": twin.to_json(), "inverse": inverse.to_json()}))
    return EXIT_OK


def _trichotomy_specs():
    K = make_field(2, 3)
    r2, r3 = K.sqrt(2), K.sqrt(3)
    one = Scalar.rational(1, K)
    unit = ((1, 0), (0, 1))
    return [
        horizontal_star_spec(2),
        horizontal_star_spec(2, lattices=[unit, ((2, 0), (0, 3))]),
        horizontal_star_spec(2, lattices=[unit, (CNum(r2), CNum(0, one))]),
        horizontal_star_spec(2, lattices=[unit, (CNum(r2), CNum(0, r2 + 1))]),
        horizontal_star_spec(3, lattices=[unit, (CNum(r2), CNum(0, one)), (CNum(one), CNum(0, r3))]),
    ]


def _emit_rows(args, name: str, rows: list, ok: bool) -> int:
    report = {"name": name, "verdict": "pass" if ok else "fail", "rows": rows}
    if args.output:
        os.makedirs(args.output, exist_ok=True)
        _write(os.path.join(args.output, "report.json"), _dump(report), args.force)
    sys.stdout.write(_dump(report))
    return EXIT_OK if ok else EXIT_SCENARIO


def cmd_scenario(args) -> int:
    name = args.name
    if name == "pop":
        rep = scenario_pop(args.genus)
    elif name == "rank2":
        rep = scenario_rank2_pants(arranged_instance(args.genus))
    elif name == "free":
        rep = scenario_free_loops(arranged_instance(args.genus))
    elif name == "chains":
        rows = [chain_demos("area", (1, 1, 1, 1), (Fraction(1, 2), Fraction(1, 2), Fraction(3, 2), Fraction(3, 2)), eps=Fraction(1, 4)),
                chain_demos("gcd", (3, 3, 3, 5), (1, 1, 1, 1), method="bfs"),
                chain_demos("gcd", (2, 4, 6, 8), (2, 2, 2, 2))]
        # the last tuple must be rejected
        ok = rows[0].ok and rows[1].ok and not rows[2].ok
        return _emit_rows(args, "chains", [r.to_json() for r in rows], ok)
    else:  # trichotomy
        rows = trichotomy_report(_trichotomy_specs())
        return _emit_rows(args, "trichotomy", rows, all(r["agrees"] for r in rows))
    report = rep.to_json()
    if args.output:
        os.makedirs(args.output, exist_ok=True)
        for fname, content in sorted(rep.artifacts.items()):
            text = content if isinstance(content, str) else _dump(content)
            _write(os.path.join(args.output, fname), text, args.force)
        _write(os.path.join(args.output, "report.json"), _dump(report), args.force)
    sys.stdout.write(_dump(report))
    return EXIT_OK if rep.ok else EXIT_SCENARIO


def cmd_export(args) -> int:
    s = _load(args.input)
    if args.format == "svg":
        text = surface_svg(s)
    elif args.format == "dot":
        dec = horizontal_decomposition(s, budget=args.budget)
        text = cylinder_digraph(dec).to_dot(dec)
    else:
        text = _dump(surface_to_json(s))
    if args.output:
        _write(args.output, text, args.force)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="flatsurgery", description="Exact translation surface surgery.")
    sub = p.add_subparsers(dest="verb", required=True)

    def add(name, fn, help_, inp=True, out=True):
        sp = sub.add_parser(name, help=help_)
        if inp:
            sp.add_argument("input", nargs="?" if name == "build" else None, help="surface JSON")
        if out:
            sp.add_argument("-o", "--output", help="output path (stdout when omitted)")
        sp.add_argument("--force", action="store_true", help="allow overwriting outputs")
        sp.set_defaults(func=fn)
        return sp

    b = add("build", cmd_build, "build a star sum or validate a polygon surface")
    b.add_argument("--star", help="star-sum spec JSON")
    add("analyze", cmd_analyze, "genus, stratum, area and period closure", out=False)
    c = add("cylinders", cmd_cylinders, "horizontal cylinders and the cylinder digraph", out=False)
    c.add_argument("--dot", help="write the digraph in DOT format")
    c.add_argument("--budget", type=int, default=500, help="tracing budget per separatrix")
    d = add("deform", cmd_deform, "shear, stretch, Rel, split, periodize, loop deformations")
    d.add_argument("--shear", action="append", metavar="C=T", help="shear cylinder C by T (repeatable)")
    d.add_argument("--stretch", action="append", metavar="C=T", help="stretch cylinder C height by 1+T")
    d.add_argument("--rel", action="append", metavar="Z=T", help="Rel deformation at zero Z")
    d.add_argument("--split", action="append", metavar="Z=EPS", help="split zero Z along slits of length EPS")
    d.add_argument("--make-periodic", action="store_true", help="split zeros until fully periodic")
    d.add_argument("--loops", help="JSON {loops: [[sc ids]], t: [values], mode}")
    s = add("schiffer", cmd_schiffer, "Schiffer variation along a path from a zero")
    s.add_argument("--path", required=True, help="path JSON {start, sector, kind, segments}")
    sc = add("scenario", cmd_scenario, "run a built-in scenario", inp=False)
    sc.add_argument("--name", required=True, choices=["pop", "rank2", "free", "chains", "trichotomy"])
    sc.add_argument("--genus", type=int, default=2)
    e = add("export", cmd_export, "export a surface as SVG, DOT or JSON")
    e.add_argument("--format", choices=["svg", "dot", "json"], default="json")
    e.add_argument("--budget", type=int, default=500)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse usage errors, including unknown flags
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CliError as exc:
        code, diag = exc.code, {"error": str(exc), **exc.extra}
    except (NotPeriodic, BudgetExhausted) as exc:
        code, diag = EXIT_BUDGET, {"error": "indeterminate", "detail": str(exc)}
    except SurfaceError as exc:
        code, diag = EXIT_INVALID, {"error": str(exc), "kind": type(exc).__name__}
    sys.stderr.write(json.dumps(diag, sort_keys=True) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
