"""Command-line front end: ``tvcf <command> ...``.

Every command prints one JSON document (or CSV for ``table --format csv``).
Failures print ``{"schema": "tvcf/1", "error": {"code": ..., ...}}`` and exit
with status 2; usage errors exit with status 2 as well.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import gallery
from .accel import accelerate
from .cf import SCHEMA, TwoVariantCF, modified_approximant
from .classifier import classify, shifted_coeffs
from .errors import DomainError, TVCFError
from .numerics import PrecisionContext, QComplex, acc, parse_number, round_half_away
from .tails import initial_tail
from .validation import verify

DIGITS_ENV = "TVCF_DIGITS"
DEFAULT_DIGITS = 128


class UsageError(Exception):
    """Bad command-line input (reported with code INVALID_INPUT)."""


# -- input resolution ------------------------------------------------------------

class Source:
    """A CF together with where it came from (gallery entry or file)."""

    def __init__(self, cf: TwoVariantCF, gallery_id=None, params=None):
        self.cf = cf
        self.gallery_id = gallery_id
        self.params = params or {}

    def describe(self) -> dict:
        if self.gallery_id is None:
            return {"input": "file", "label": self.cf.label}
        return {"gallery": self.gallery_id,
                "params": {k: str(v) for k, v in self.params.items()}}


def _load_file(path: str) -> TwoVariantCF:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read TVCF file {path!r}: {exc}") from exc
    if isinstance(data, dict) and "cf" in data and "a" not in data:
        data = data["cf"]
    try:
        return TwoVariantCF.from_dict(data)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed TVCF file {path!r}: missing {exc}") from exc


def resolve_source(args) -> Source:
    if args.input:
        if args.source:
            raise UsageError("give either a gallery id or --input, not both")
        return Source(_load_file(args.input))
    if not args.source:
        raise UsageError("a gallery id (see `tvcf gallery list`) or --input FILE is required")
    params = gallery.parse_params(args.params)
    entry = gallery.get_entry(args.source)
    params = entry.normalize(params)
    return Source(entry.build(params), args.source, params)


def resolve_reference(spec: str, source: Source, ctx: PrecisionContext):
    spec = (spec or "none").strip()
    if spec == "none":
        return None
    if spec == "oracle":
        if source.gallery_id is None:
            raise UsageError("--reference oracle needs a gallery input; use literal:V for files")
        return gallery.oracle_value(source.gallery_id, source.params, ctx)
    if spec.startswith("literal:"):
        return ctx.mpc(parse_number(spec[len("literal:"):]))
    raise UsageError(f"--reference must be none, oracle or literal:V, got {spec!r}")


# -- JSON helpers ----------------------------------------------------------------

def _num(x, ctx: PrecisionContext):
    """[re, im] decimal strings at working precision."""
    z = ctx.mpc(x)
    return [ctx.mp.nstr(z.real, ctx.digits), ctx.mp.nstr(z.imag, ctx.digits)]


def _jsonable(value, ctx):
    if isinstance(value, dict):
        return {str(k): _jsonable(v, ctx) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v, ctx) for v in value]
    if isinstance(value, (bool, int, str, type(None))):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, QComplex):
        return value.pair()
    if isinstance(value, Fraction):
        return str(value)
    return _num(value, ctx)


def _emit(doc: dict, out) -> None:
    out.write(json.dumps({"schema": SCHEMA, **doc}, indent=2) + "\n")


def _rows_iters(args):
    N, J = args.rows, args.iters
    if J < 0 or N < J + 1:
        raise DomainError(f"need 0 <= iters <= rows - 1, got rows={N}, iters={J}", N=N, J=J)
    return N, J


# -- commands ----------------------------------------------------------------------

def cmd_classify(args, ctx, out):
    src = resolve_source(args)
    core = src.cf.core()
    sc = shifted_coeffs(core)
    tag = classify(sc, ctx)
    doc = {"command": "classify", **src.describe(), "tag": tag.name,
           "witness": _jsonable(tag.witness, ctx),
           "degrees": {"k": core.k, "l": core.l},
           "shifted": _jsonable(sc.as_dict(), ctx)}
    if args.with_tail:
        doc["tail"] = initial_tail(tag, sc, ctx).to_dict()
    if args.dump_cf:
        doc["cf"] = src.cf.to_dict()
    _emit(doc, out)


def cmd_eval(args, ctx, out):
    src = resolve_source(args)
    if args.n < 0:
        raise DomainError(f"--n must be non-negative, got {args.n}")
    omega = parse_number(args.omega)
    value = modified_approximant(src.cf, args.n, omega, ctx)
    ref = resolve_reference(args.reference, src, ctx)
    doc = {"command": "eval", **src.describe(), "n": args.n, "omega": omega.pair(),
           "digits": ctx.digits, "value": _num(value, ctx)}
    if ref is not None:
        doc["acc"] = acc(value, ref, ctx)
    _emit(doc, out)


def cmd_accelerate(args, ctx, out):
    src = resolve_source(args)
    N, J = _rows_iters(args)
    ref = resolve_reference(args.reference, src, ctx)
    result = accelerate(src.cf, N, J, ctx, diagnostics=False)
    doc = {"command": "accelerate", **src.describe(), "N": N, "J": J, "digits": ctx.digits,
           "tag": result.table.model.tag.name, "value": _num(result.value, ctx)}
    if ref is not None:
        doc["acc"] = acc(result.value, ref, ctx)
    _emit(doc, out)


def table_cells(cf, N, J, ref, ctx):
    """AccelResult plus the triangular accuracy table."""
    result = accelerate(cf, N, J, ctx, reference=ref)
    return result, result.diagnostics


def cmd_table(args, ctx, out):
    src = resolve_source(args)
    N, J = _rows_iters(args)
    ref = resolve_reference(args.reference or "oracle", src, ctx)
    if ref is None:
        raise UsageError("table needs a reference value (oracle or literal:V)")
    result, cells = table_cells(src.cf, N, J, ref, ctx)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "j", "delta"])
        for n, row in enumerate(cells, start=1):
            for j, d in enumerate(row):
                writer.writerow([n, j, round_half_away(d, 2)])
        out.write(buf.getvalue())
        return
    _emit({"command": "table", **src.describe(), "N": N, "J": J, "digits": ctx.digits,
           "tag": result.table.model.tag.name, "reference": _num(ref, ctx),
           "cells": [{"n": n, "j": j, "delta": d}
                     for n, row in enumerate(cells, start=1) for j, d in enumerate(row)]},
          out)


def cmd_gallery(args, ctx, out):
    if args.action == "list":
        _emit({"command": "gallery list", "entries": [
            {"id": e.id, "params": list(e.params),
             "defaults": {k: str(QComplex.of(v)) for k, v in e.defaults.items()},
             "description": e.description}
            for e in gallery.GALLERY.values()]}, out)
        return
    if not args.source:
        raise UsageError("gallery eval needs a gallery id")
    src = resolve_source(args)
    value = gallery.oracle_value(src.gallery_id, src.params, ctx)
    doc = {"command": "gallery eval", **src.describe(), "digits": ctx.digits,
           "value": _num(value, ctx)}
    literal = gallery.get_entry(src.gallery_id).literal(src.params)
    if literal is not None:
        doc["literal"] = literal
        doc["acc_vs_literal"] = acc(value, ctx.mpc(literal), ctx)
    _emit(doc, out)


def cmd_verify(args, ctx, out):
    src = resolve_source(args)
    ref = resolve_reference(args.reference, src, ctx)
    report = verify(src.cf, ctx, reference=ref)
    report = {k: v for k, v in report.items() if k != "schema"}
    _emit({"command": "verify", **src.describe(), **_jsonable(report, ctx)}, out)
    if args.strict and not report["passed"]:
        raise VerificationFailed([c["name"] for c in report["checks"] if not c["passed"]])


class VerificationFailed(TVCFError):
    code = "VERIFICATION_FAILED"

    def __init__(self, failed):
        super().__init__(f"failed checks: {', '.join(failed)}", failed=",".join(failed))


# -- parser ------------------------------------------------------------------------------

def _default_digits() -> int:
    raw = os.environ.get(DIGITS_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_DIGITS
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{DIGITS_ENV} must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    digits_help = (f"working precision in decimal digits (default ${DIGITS_ENV} or "
                   f"{DEFAULT_DIGITS})")
    # SUPPRESS keeps a subcommand from resetting a value given before it
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=argparse.SUPPRESS, help=digits_help)
    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("source", nargs="?", help="gallery id")
    source.add_argument("params", nargs="*", help="gallery parameters as name=value")
    source.add_argument("--input", help="TVCF JSON file instead of a gallery entry")
    reference = argparse.ArgumentParser(add_help=False)
    reference.add_argument("--reference", default=None,
                           help="none | oracle | literal:V")
    sizes = argparse.ArgumentParser(add_help=False)
    sizes.add_argument("--rows", type=int, default=11, help="initial row length N")
    sizes.add_argument("--iters", type=int, default=10, help="iterations J (<= N-1)")

    parser = argparse.ArgumentParser(prog="tvcf", description=__doc__.splitlines()[0])
    parser.add_argument("--digits", type=int, default=None, help=digits_help)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common, source], help="subclass and witnesses")
    p.add_argument("--with-tail", action="store_true", help="include the initial tail model")
    p.add_argument("--dump-cf", action="store_true", help="include the CF in TVCF JSON form")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("eval", parents=[common, source, reference],
                       help="modified approximant S_n(omega)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--omega", default="0")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("accelerate", parents=[common, source, reference, sizes],
                       help="accelerated value S_1(u_{1,J})")
    p.set_defaults(func=cmd_accelerate)

    p = sub.add_parser("table", parents=[common, source, reference, sizes],
                       help="accuracy table delta_{nj}")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("gallery", parents=[common], help="list or evaluate reference oracles")
    p.add_argument("action", choices=("list", "eval"))
    p.add_argument("source", nargs="?")
    p.add_argument("params", nargs="*")
    p.set_defaults(func=cmd_gallery, input=None)

    p = sub.add_parser("verify", parents=[common, source, reference],
                       help="residual, branch and order checks")
    p.add_argument("--strict", action="store_true",
                   help="emit an error object and fail when any check fails")
    p.set_defaults(func=cmd_verify)
    return parser


def _error(exc_dict, out) -> int:
    _emit({"error": exc_dict}, out)
    return 2


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code in (0, None):
            return 0
        return _error({"code": "INVALID_INPUT", "message": "invalid command line"}, out)
    try:
        digits = args.digits if args.digits is not None else _default_digits()
        try:
            ctx = PrecisionContext(digits)
        except ValueError as exc:
            raise DomainError(str(exc), digits=digits) from None
        args.func(args, ctx, out)
    except TVCFError as exc:
        return _error(exc.to_dict(), out)
    except UsageError as exc:
        return _error({"code": "INVALID_INPUT", "message": str(exc)}, out)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
