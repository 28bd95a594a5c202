"""Batch front end: read one JSON request, run it, print a report.

Exit codes: 0 success, 1 schema error, 2 capacity error, 3 reconstruction
failure (the truncated series is still printed).  Wall-clock timing goes to
stderr so stdout is byte-identical for a given request + seed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .errors import CapacityError, SchemaError
from .pipeline import parse_request, run


def build_parser():
    p = argparse.ArgumentParser(
        prog="analyze",
        description=(
            "Analyze a Hamiltonian torus or SL2 module: moment-map shell, "
            "largeness diagnostics, quotient Hilbert series, Gorenstein "
            "certification."
        ),
    )
    p.add_argument(
        "file",
        help="path to a JSON request object, or '-' to read stdin",
    )
    p.add_argument(
        "--degree", type=int, default=None, help="truncation degree override"
    )
    p.add_argument(
        "--denominator",
        default=None,
        metavar="e1,e2,...",
        help="force the quotient denominator prod (1-t^e_i)",
    )
    p.add_argument(
        "--oracle",
        action="store_true",
        default=None,
        help="run brute-force cross-checks (small inputs only)",
    )
    p.add_argument("--seed", type=int, default=None, help="probe seed override")
    p.add_argument(
        "--format",
        dest="fmt",
        choices=("text", "machine"),
        default="text",
        help="text report or deterministic JSON",
    )
    return p


def _load_request(args):
    if args.file == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.file, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise SchemaError(f"cannot read request file: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg}", line=exc.lineno) from exc
    if not isinstance(obj, dict):
        raise SchemaError("request must be a JSON object")

    if args.degree is not None:
        obj["degree"] = args.degree
    if args.denominator is not None:
        try:
            obj["denominators"] = [
                int(part) for part in args.denominator.split(",") if part.strip()
            ]
        except ValueError as exc:
            raise SchemaError(
                "expected comma-separated integers", field="denominator"
            ) from exc
    if args.oracle:
        obj["oracle"] = True
    if args.seed is not None:
        obj["seed"] = args.seed
    return parse_request(obj)


def main(argv=None):
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        request = _load_request(args)
        report = run(request)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 1
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 2

    if args.fmt == "machine":
        sys.stdout.write(report.to_json())
    else:
        sys.stdout.write(report.render_text())
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    print(f"elapsed: {elapsed_ms:.1f} ms", file=sys.stderr)
    return 3 if report.reconstruction_failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
