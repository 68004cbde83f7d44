"""Command-line front end.

    edsaffine classify --ode "y' = y/x + x^4"
    edsaffine symmetries --ode "y' = exp(x)" --json
    edsaffine transform --g 1 0 -3 1 0 0 --ode "y' = 3"
    edsaffine cauchy --system tests/fixtures/example_a.txt
    edsaffine integrals --system tests/fixtures/example_a.txt
    edsaffine verify example-a
    edsaffine verify-table --row 3 --F "s^2"

Exit status: 0 on success, 1 when a computation or verification fails,
2 on usage errors (bad arguments, unparsable input, unreadable files).
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction

from edsaffine import __version__, assumptions
from edsaffine.affine import (
    AffineElement,
    BasisChange,
    NonGraphError,
    change_basis,
    maurer_cartan_coframe,
    transform_ode,
    verify_structure_equations,
)
from edsaffine.classify import ClassificationError, NormalizationError, TABLE, classify, verify_table_row
from edsaffine.pfaffian import (
    DependentGenerators,
    QuadratureError,
    cauchy_system,
    integrals_independent,
    is_completely_integrable,
    load_fixture,
    verify_example_a,
    verify_example_b,
)
from edsaffine.symkernel.numeric import DomainError, parameter_sets, parameter_values, seeded
from edsaffine.symkernel.parser import ParseError, parse, parse_ode
from edsaffine.symkernel.printer import to_string
from edsaffine.symmetry import SamplingFailure, SymmetryDisagreement, symmetry_algebra

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


class Failure(Exception):
    """A mathematical failure; carries a partial payload for the report."""

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload or {}


MATH_ERRORS = (
    ClassificationError,
    NormalizationError,
    QuadratureError,
    NonGraphError,
    SymmetryDisagreement,
    SamplingFailure,
    DomainError,
    DependentGenerators,
    ZeroDivisionError,
)


def _ode(text):
    if text is None:
        raise UsageError("--ode is required")
    f = parse_ode(text)
    unbound = sorted(f.free_symbols - {"x", "y"} - set(parameter_sets()))
    if unbound:
        raise UsageError(f"unbound parameters {unbound}; give value sets with --param NAME=V1,V2,...")
    return f


def _rhs(f) -> str:
    return "y' = " + to_string(f)


# -- subcommands -------------------------------------------------------------------


def cmd_classify(args):
    res = classify(_ode(args.ode))
    out = res.to_json()
    return out, res.case != "unclassified"


def cmd_symmetries(args):
    f = _ode(args.ode)
    alg = symmetry_algebra(f, path=args.path)
    return {"ode": _rhs(f), **alg.to_json()}, True


def _group_element(vals):
    try:
        nums = [Fraction(v) for v in vals]
    except (ValueError, ZeroDivisionError):
        raise UsageError("--g takes six rationals: x3 x4 x5 x6 x1 x2") from None
    try:
        return AffineElement.from_params(*nums)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_transform(args):
    if args.g is None:
        raise UsageError("--g is required")
    g = _group_element(args.g)
    f = _ode(args.ode)
    return {"ode": _rhs(f), "g": g.to_json(), "transformed": _rhs(transform_ode(g, f))}, True


def _system(path):
    if path is None:
        raise UsageError("--system is required")
    try:
        return load_fixture(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except ValueError as exc:
        if isinstance(exc, (ParseError, DependentGenerators)):
            raise
        raise UsageError(f"{path}: {exc}") from None


def cmd_cauchy(args):
    sigma = _system(args.system)
    ch = cauchy_system(sigma)
    out = {
        "chart": {"name": sigma.chart.name, "coordinates": list(sigma.chart.coords)},
        "generators": [str(g) for g in sigma.generators],
        "completely_integrable": is_completely_integrable(sigma),
        "cauchy_rank": ch.rank,
        "cauchy": [str(g) for g in ch.generators],
        "cauchy_integrable": is_completely_integrable(ch),
    }
    return out, out["cauchy_integrable"]


def cmd_integrals(args):
    from edsaffine.pfaffian import integrate_system

    sigma = _system(args.system)
    try:
        ch, W, us = integrate_system(sigma, max_degree=args.max_degree)
    except QuadratureError as exc:
        found = getattr(exc, "partial", None) or []
        raise Failure(str(exc), {"integrals": [to_string(u) for u in found]}) from None
    ok = integrals_independent(us, sigma.chart)
    out = {
        "cauchy_rank": ch.rank,
        "ordering": [str(w) for w in W],
        "integrals": [to_string(u) for u in us],
        "independent": ok,
    }
    return out, ok


def _structure_report(seed_draws: int):
    w = maurer_cartan_coframe()
    ok, residuals = verify_structure_equations(w)
    rng = random.Random(12345)
    changed = []
    for _ in range(seed_draws):
        while True:
            a, b, c = (Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(3))
            if a * c:
                break
        good, _ = verify_structure_equations(change_basis(w, BasisChange(a, b, c)))
        changed.append({"a": str(a), "b": str(b), "c": str(c), "ok": good})
    out = {
        "ok": ok and all(c["ok"] for c in changed),
        "equations": ok,
        "residuals": [str(r) for r in residuals],
        "basis_changes": changed,
    }
    return out


def cmd_verify(args):
    if args.target == "structure-equations":
        out = _structure_report(args.basis_changes)
    elif args.target == "example-a":
        out = verify_example_a()
    else:
        out = verify_example_b()
    return out, bool(out["ok"])


def cmd_verify_table(args):
    if args.row not in TABLE:
        raise UsageError(f"--row must be one of {sorted(TABLE)}")
    if args.F is None:
        raise UsageError("--F is required")
    F = parse(args.F)
    if F.free_symbols - {"s"}:
        raise UsageError("F must be an expression in the single variable s")
    chk = verify_table_row(args.row, F)
    return {"F": to_string(F), **chk.to_json()}, chk.ok


COMMANDS = {
    "classify": cmd_classify,
    "symmetries": cmd_symmetries,
    "transform": cmd_transform,
    "cauchy": cmd_cauchy,
    "integrals": cmd_integrals,
    "verify": cmd_verify,
    "verify-table": cmd_verify_table,
}


def _param_sets(items) -> dict:
    out = {}
    for item in items:
        name, sep, vals = item.partition("=")
        try:
            if not sep or not name.strip():
                raise ValueError
            out[name.strip()] = [Fraction(v) for v in vals.split(",")]
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"--param expects NAME=V1,V2,... (got {item!r})") from None
    return out


# -- parsing and output --------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every sampled zero test")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--timing", action="store_true", help="include wall time in the JSON report")
    common.add_argument("--param", action="append", default=[], metavar="NAME=V1,V2,...",
                        help="value set for a symbolic parameter of the ODE")

    p = _Parser(prog="edsaffine", description="Pfaffian systems and affine classification of y' = f(x, y)")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("classify", parents=[common], help="case, symmetry dimension and standard form")
    s.add_argument("--ode", required=True)

    s = sub.add_parser("symmetries", parents=[common], help="affine symmetry algebra")
    s.add_argument("--ode", required=True)
    s.add_argument("--path", choices=("auto", "symbolic", "numeric"), default="auto")

    s = sub.add_parser("transform", parents=[common], help="apply an affine map to the ODE")
    s.add_argument("--g", nargs=6, metavar="V", required=True, help="x3 x4 x5 x6 x1 x2")
    s.add_argument("--ode", required=True)

    s = sub.add_parser("cauchy", parents=[common], help="Cauchy characteristic system of a fixture")
    s.add_argument("--system", required=True)

    s = sub.add_parser("integrals", parents=[common], help="first integrals by quadrature")
    s.add_argument("--system", required=True)
    s.add_argument("--max-degree", type=int, default=4)

    s = sub.add_parser("verify", parents=[common], help="built-in identity checks")
    s.add_argument("target", choices=("structure-equations", "example-a", "example-b"))
    s.add_argument("--basis-changes", type=int, default=20)

    s = sub.add_parser("verify-table", parents=[common], help="check a table row for a concrete F")
    s.add_argument("--row", type=int, required=True)
    s.add_argument("--F", required=True)
    return p


def _text(obj, indent=0) -> list:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        width = max((len(str(k)) for k in obj), default=0)
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{str(k).ljust(width)}  {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and v:
                sub = _text(v, indent + 1)
                lines.append(f"{pad}- " + sub[0].lstrip())
                lines.extend(sub[1:])
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(obj))
    return lines


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    if v == [] or v == {}:
        return "(none)"
    return str(v)


def run(argv=None):
    """Run one command; returns (exit code, report dict)."""
    argv = list(sys.argv[1:] if argv is None else argv)
    report = {"schema": SCHEMA_VERSION, "command": argv}
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        report.update(status="usage-error", error=str(exc))
        return 2, report
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0), None
    report["seed"] = args.seed
    t0 = time.perf_counter()
    payload, code = {}, 0
    with seeded(args.seed), assumptions.collect() as led:
        try:
            params = _param_sets(args.param)
            with parameter_values(params):
                payload, ok = COMMANDS[args.command](args)
            code = 0 if ok else 1
            report["status"] = "ok" if ok else "failed"
        except (UsageError, ParseError) as exc:
            code = 2
            report.update(status="usage-error", error=str(exc))
        except Failure as exc:
            code, payload = 1, exc.payload
            report.update(status="failed", error=str(exc))
        except MATH_ERRORS as exc:
            code = 1
            report.update(status="failed", error=f"{type(exc).__name__}: {exc}")
    report["result"] = payload
    report["assumptions"] = sorted(set(led.items) | set(payload.get("assumptions", []) if isinstance(payload, dict) else []))
    elapsed = time.perf_counter() - t0
    report["_elapsed"] = elapsed
    report["_json"] = args.json
    report["_timing"] = args.timing
    return code, report


def render(report) -> tuple:
    """(stdout text, stderr text) for a report returned by run()."""
    as_json = report.pop("_json", False)
    timing = report.pop("_timing", False)
    elapsed = report.pop("_elapsed", None)
    if as_json:
        if timing and elapsed is not None:
            report["timing_seconds"] = round(elapsed, 6)
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n", ""
    lines = [f"command  {' '.join(report['command'])}", f"status   {report.get('status')}"]
    if "error" in report:
        lines.append(f"error    {report['error']}")
    if report.get("result"):
        lines.append("result:")
        lines.extend(_text(report["result"], 1))
    lines.append("assumptions:")
    lines.extend(_text(report.get("assumptions") or ["(none)"], 1))
    if elapsed is not None:
        lines.append(f"time     {elapsed:.3f} s")
    return "\n".join(lines) + "\n", ""


def main(argv=None) -> int:
    code, report = run(argv)
    if report is None:
        return code
    if "_json" not in report:  # parse failure before options were known
        argv = list(sys.argv[1:] if argv is None else argv)
        if "--json" in argv:
            sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
        else:
            sys.stderr.write(f"edsaffine: {report.get('error')}\n")
        return code
    out, err = render(report)
    sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
