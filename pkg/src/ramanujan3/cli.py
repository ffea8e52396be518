"""Command-line interface: ``ramanujan3 {derive,verify,recover,identify,constants}``.

Every command builds a :class:`Report`.  ``--format machine`` prints it as
JSON with a fixed key order and no timing data, so the output is a pure
function of the arguments and can be compared byte for byte.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .algebraic import identify, identify_decimal
from .bigreal import BigReal
from .builder import build_series, recover_r
from .catalog import Catalog, builtin, derived_entry, dumps, load
from .errors import Level3Error, NotAvailableError
from .series import pi_residual
from .singular import (
    alpha_from_sigma,
    alpha_numeric,
    closed_form,
    g_from_lambda,
    lambda_star_numeric,
)

DEFAULT_PREC = 256
PREC_ENV = "RAMANUJAN3_PREC"
DEFAULT_DIGITS = 30


@dataclass
class Report:
    command: str
    inputs: dict
    precision_bits: int
    results: list = field(default_factory=list)
    status: str = "ok"
    error: str | None = None
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_machine(self) -> str:
        payload = {
            "command": self.command,
            "inputs": self.inputs,
            "precision_bits": self.precision_bits,
            "status": self.status,
            "error": self.error,
            "results": self.results,
        }
        return json.dumps(payload, indent=2, sort_keys=False) + "\n"

    def to_text(self) -> str:
        lines = [f"{self.command}: {self.status} ({self.precision_bits} bits, {self.wall_time:.2f} s)"]
        if self.error:
            lines.append(f"  error: {self.error}")
        for item in self.results:
            lines.append("")
            for key, value in item.items():
                lines.append(f"  {key:<14} {value}")
        return "\n".join(lines) + "\n"


def _fail(report: Report, exc: Exception) -> Report:
    report.status = "error"
    report.error = f"{type(exc).__name__}: {exc}"
    return report


def _digits_for(prec: int) -> int:
    return max(10, int(prec * math.log10(2)) - 5)


def _surd_results(record, degree: int, prec: int) -> dict:
    """Identify y, z, a, b of a record by recomputing at doubled precision."""
    found = {}
    bits = max(8, (record.precision_bits - 128) // degree)
    cache = {}

    def recompute(name):
        def at(p):
            if p not in cache:
                cache[p] = build_series(record.r.r, p)
            return getattr(cache[p], name)

        return at

    for name in ("y", "z", "a", "b"):
        alg = identify(getattr(record, name), degree, bits, recompute=recompute(name))
        if alg is None:
            found[f"{name}_poly"] = "not found"
        else:
            found[f"{name}_poly"] = alg.poly_text(name)
            if alg.surd_form is not None:
                found[f"{name}_surd"] = alg.surd_form.to_text()
    return found


def _emit(path: str, r: Fraction, found: dict) -> str:
    if not all(f"{k}_surd" in found for k in ("z", "a", "b")):
        return "not written: z, a, b have no quadratic surd forms"
    entry = derived_entry(
        f"derived-r{r}".replace("/", "_"), r, found["z_surd"], found["a_surd"], found["b_surd"],
        citation=f"derived here from lambda*({r}) and alpha({r}); identification is heuristic",
    )
    with open(path, "w") as fh:
        fh.write(dumps([entry]))
    return f"written to {path}"


def cmd_derive(r: Fraction, prec: int, identify_degree: int = 0, digits: int | None = None,
               emit: str | None = None) -> Report:
    report = Report("derive", {"r": str(r), "identify_degree": identify_degree}, prec)
    try:
        record = build_series(r, prec)
        result = record.as_dict(digits or _digits_for(prec))
        result["certified"] = f"|sum - 1/pi| < 2^-{prec - 32}"
        if identify_degree:
            found = _surd_results(record, identify_degree, prec)
            result.update(found)
            if emit:
                result["catalog_entry"] = _emit(emit, r, found)
        report.results.append(result)
    except Level3Error as exc:
        _fail(report, exc)
    return report


def _verify_entry(catalog: Catalog, entry, digits: int, prec: int) -> dict:
    target = math.ceil(digits * math.log2(10)) + 8
    params = catalog.series_params(entry, max(prec, target + 32))
    residual, summed = pi_residual(params, target + 16)
    tolerance = BigReal.of(Fraction(1, 10**digits), residual.precision_bits)
    passed = abs(residual.value) + summed.tail_bound.value < tolerance.value
    return {
        "id": entry.id,
        "status": "pass" if passed else "FAIL",
        "residual": residual.to_decimal(6),
        "tail_bound": summed.tail_bound.to_decimal(6),
        "terms": summed.terms,
        "tolerance": f"1e-{digits}",
    }


def cmd_verify(catalog: Catalog, ids: list[str], digits: int, prec: int) -> Report:
    report = Report("verify", {"ids": ids or ["--all"], "digits": digits}, prec)
    try:
        if ids:
            entries = [catalog[i] for i in ids]
        else:
            entries = sorted((e for e in catalog.series() if not e.is_placeholder), key=lambda e: e.id)
        for entry in entries:
            if entry.kind != "series":
                raise NotAvailableError(f"{entry.id} is a constant, not a series")
            if entry.is_placeholder:
                report.results.append({"id": entry.id, "status": "skipped",
                                       "reason": "listed without values (conjectured)"})
                continue
            report.results.append(_verify_entry(catalog, entry, digits, prec))
    except Level3Error as exc:
        return _fail(report, exc)
    failed = [r["id"] for r in report.results if r["status"] == "FAIL"]
    if failed:
        report.status = "fail"
        report.error = "residual above tolerance: " + ", ".join(failed)
    elif ids and all(r["status"] == "skipped" for r in report.results):
        report.status = "fail"
        report.error = "nothing to verify"
    return report


def cmd_recover(catalog: Catalog, entry_id: str, prec: int, digits: int | None = None) -> Report:
    report = Report("recover", {"id": entry_id}, prec)
    try:
        record = recover_r(catalog.series_params(entry_id, prec))
        result = {"id": entry_id}
        result.update(record.as_dict(digits or _digits_for(prec)))
        report.results.append(result)
    except Level3Error as exc:
        _fail(report, exc)
    return report


def cmd_identify(text: str, degree: int, height: int | None = None, prec: int | None = None) -> Report:
    report = Report("identify", {"value": text, "degree": degree, "height": height}, prec or 0)
    try:
        alg = identify_decimal(text, degree, height, prec)
    except (Level3Error, ValueError, ZeroDivisionError) as exc:
        return _fail(report, exc)
    if alg is None:
        report.status = "fail"
        report.error = f"no polynomial of degree <= {degree} with {height}-bit coefficients found"
        report.precision_bits = 0
        return report
    report.precision_bits = alg.approx.precision_bits
    result = {"polynomial": alg.poly_text("y"), "degree": alg.degree, "certificate": alg.certificate}
    if alg.surd_form is not None:
        result["surd"] = alg.surd_form.to_text()
    report.results.append(result)
    return report


def _cross_check(name: str, numeric: BigReal, closed: BigReal, prec: int) -> dict:
    agree = numeric.close_to(closed, prec - 24)
    return {"quantity": name, "closed_form": closed.to_decimal(_digits_for(prec)),
            "matches_numeric": "yes" if agree else "NO"}


def cmd_constants(r: Fraction, prec: int, digits: int | None = None) -> Report:
    report = Report("constants", {"r": str(r)}, prec)
    digits = digits or _digits_for(prec)
    try:
        m = lambda_star_numeric(r, prec)
        alpha = alpha_numeric(r, prec, m)
        row = {"r": str(r), "lambda_star": m.k.to_decimal(digits), "alpha": alpha.to_decimal(digits)}
        g = None
        if r >= 1:
            g = g_from_lambda(m, r).g_value
            row["G"] = g.to_decimal(digits)
        report.results.append(row)
        checks = []
        for quantity, numeric in (("lambda_star", m.k), ("alpha", alpha), ("g", g)):
            if numeric is None:
                continue
            try:
                checks.append(_cross_check(quantity, numeric, closed_form(quantity, r, prec), prec))
            except NotAvailableError:
                pass
        if r.denominator == 1 and int(r) in (57, 93):
            checks.append(_cross_check("alpha_from_sigma", alpha, alpha_from_sigma(int(r), prec=prec), prec))
        if not checks:
            report.results.append({"note": "no closed form known for this r"})
        report.results.extend(checks)
        if any(c["matches_numeric"] == "NO" for c in checks):
            report.status = "fail"
            report.error = "closed form disagrees with numerics"
    except Level3Error as exc:
        _fail(report, exc)
    return report


# ----------------------------------------------------------------------
# argument handling


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _default_prec() -> int:
    raw = os.environ.get(PREC_ENV)
    if raw is None:
        return DEFAULT_PREC
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"{PREC_ENV} must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, default=None,
                        help=f"working precision in bits (default ${PREC_ENV} or {DEFAULT_PREC})")
    common.add_argument("--digits", type=int, default=None, help="decimal digits to print or verify")
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--catalog", default=None, help="catalog file (default: built-in)")

    parser = argparse.ArgumentParser(
        prog="ramanujan3", description="Build and check Ramanujan-type series for 1/pi at high precision.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derive", parents=[common], help="build and certify the level-3 series for r")
    p.add_argument("r", type=_rational)
    p.add_argument("--identify-degree", type=int, default=0,
                   help="also search minimal polynomials of y, z, a, b up to this degree")
    p.add_argument("--emit", metavar="PATH", default=None,
                   help="write the identified series as a derived-here catalog entry")

    p = sub.add_parser("verify", parents=[common], help="sum catalog series against 1/pi")
    p.add_argument("ids", nargs="*")
    p.add_argument("--all", action="store_true", help="verify every series in the catalog")

    p = sub.add_parser("recover", parents=[common], help="recover r from a catalog series")
    p.add_argument("id")

    p = sub.add_parser("identify", parents=[common], help="minimal polynomial of a decimal")
    p.add_argument("value")
    p.add_argument("--degree", type=int, default=4)
    p.add_argument("--height", type=int, default=None,
                   help="coefficient size bound in bits (default: what the digits support)")

    p = sub.add_parser("constants", parents=[common], help="lambda*, alpha and G at r")
    p.add_argument("r", type=_rational)
    return parser


def dispatch(args: argparse.Namespace) -> Report:
    prec = args.prec if args.prec is not None else _default_prec()
    if args.command == "identify":
        return cmd_identify(args.value, args.degree, args.height, args.prec)
    catalog = builtin() if args.catalog is None else load(args.catalog)
    if args.command == "derive":
        return cmd_derive(args.r, prec, args.identify_degree, args.digits, args.emit)
    if args.command == "verify":
        if not args.all and not args.ids:
            build_parser().error("verify needs entry ids or --all")
        return cmd_verify(catalog, [] if args.all else args.ids, args.digits or DEFAULT_DIGITS, prec)
    if args.command == "recover":
        return cmd_recover(catalog, args.id, prec, args.digits)
    return cmd_constants(args.r, prec, args.digits)


def run(argv: list[str] | None = None) -> Report:
    return dispatch(build_parser().parse_args(argv))


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        report = dispatch(args)
    except Level3Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report.wall_time = time.perf_counter() - start
    sys.stdout.write(report.to_machine() if args.format == "machine" else report.to_text())
    return 0 if report.ok else 1


__all__ = [
    "Report",
    "build_parser",
    "cmd_constants",
    "cmd_derive",
    "cmd_identify",
    "cmd_recover",
    "cmd_verify",
    "dispatch",
    "main",
    "run",
]
