"""Command-line driver: single computations, corpus verification runs,
and enumeration listings with machine-readable output."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .field import DEFAULT_PRIME, PrimeField
from .fracideal import (
    colon,
    conductor,
    enumerate_ideals,
    make_ideal,
    trace_ideal,
)
from .graded import present, resolve, transpose
from .homology import annihilator, ext, tor
from .semigroup import SemigroupError, enumerate_by_genus, from_generators
from .theorems import CHECK_NAMES, RunConfig, SemigroupContext, run_corpus

PRIME_ENV = "SEMITRACE_PRIME"


def _parse_ints(text: str, what: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise SystemExit(f"error: malformed {what} {text!r}; expected comma-separated integers")


def _default_prime() -> int:
    env = os.environ.get(PRIME_ENV)
    return int(env) if env else DEFAULT_PRIME


def _semigroup(args):
    try:
        return from_generators(_parse_ints(args.semigroup, "--semigroup"))
    except SemigroupError as exc:
        raise SystemExit(f"error: {exc}")


def _ideal(S, text: str):
    expos = _parse_ints(text, "--ideal")
    if not expos:
        raise SystemExit("error: --ideal needs at least one exponent")
    return make_ideal(S, expos)


def cmd_compute(args) -> int:
    S = _semigroup(args)
    field = PrimeField(args.prime)
    kind = args.kind
    out: dict
    if kind == "conductor":
        out = {"conductor": list(conductor(S).generators)}
    elif kind == "enumerate-ideals":
        out = {"ideals": [list(m.generators) for m in enumerate_ideals(S)]}
    else:
        if args.ideal is None:
            raise SystemExit(f"error: compute {kind} needs --ideal")
        M = _ideal(S, args.ideal)
        if kind == "trace":
            out = {"trace": list(trace_ideal(M).generators)}
        elif kind == "colon":
            if args.other is None:
                raise SystemExit("error: compute colon needs --other")
            N = _ideal(S, args.other)
            out = {"colon": list(colon(M, N).generators)}
        elif kind == "resolve":
            res = resolve(present(M, field), args.length)
            out = {
                "betti": list(res.betti),
                "shifts": [list(m.shifts) for m in res.modules],
            }
        elif kind == "transpose":
            out = {"transpose": transpose(present(M, field)).presentation.to_json_dict()}
        elif kind == "ext-ann":
            ctx = SemigroupContext(S, field)
            P = ctx.present_ideal(M)
            H = ext(args.index, P, ctx.omega("m", P))
            out = {"ext_ann": list(annihilator(H).generators), "dims": H.dims}
        elif kind == "tor-ann":
            ctx = SemigroupContext(S, field)
            P = ctx.present_ideal(M)
            H = tor(args.index, P, ctx.transpose_of("m", P))
            out = {"tor_ann": list(annihilator(H).generators), "dims": H.dims}
        else:
            raise SystemExit(f"error: unknown compute kind {kind!r}")
    print(json.dumps(out, sort_keys=True))
    return 0


def report_to_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["statement", "semigroup", "ideal", "pass", "ms"])
    for row in report["rows"]:
        w.writerow(
            [
                row["statement"],
                ",".join(map(str, row["semigroup"])),
                row["ideal"],
                row["pass"],
                row["ms"],
            ]
        )
    return buf.getvalue()


def cmd_verify(args) -> int:
    checks = tuple(CHECK_NAMES) if args.checks == "all" else tuple(args.checks.split(","))
    try:
        cfg = RunConfig(
            prime=args.prime,
            max_genus=args.max_genus,
            i_max=args.imax,
            checks=checks,
            jobs=args.jobs,
        )
    except ValueError as exc:
        raise SystemExit(f"error: {exc}")
    report = run_corpus(cfg)
    if args.report:
        try:
            with open(args.report, "w", encoding="utf-8") as fh:
                if args.format == "json":
                    json.dump(report, fh, sort_keys=True, indent=1)
                    fh.write("\n")
                else:
                    fh.write(report_to_csv(report))
        except OSError as exc:
            print(f"error writing report: {exc}", file=sys.stderr)
            return 2
    print(f"checked {report['cases']} cases, {report['failures']} failures")
    for row in report["rows"]:
        if not row["pass"]:
            print(f"FAIL {row['statement']} {row['semigroup']} {row['ideal']}", file=sys.stderr)
    return 0 if report["failures"] == 0 else 1


def cmd_enumerate(args) -> int:
    for S in enumerate_by_genus(args.max_genus):
        cond = ",".join(map(str, conductor(S).generators))
        sym = "yes" if S.is_symmetric() else "no"
        count = len(enumerate_ideals(S))
        print(
            f"{S} frobenius={S.frobenius} genus={S.genus} symmetric={sym} "
            f"conductor={cond} ideals={count}"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="semitrace",
        description="Trace ideals, conductors, and Ext/Tor annihilators over "
        "numerical semigroup rings.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("compute", help="one computation, JSON on stdout")
    pc.add_argument(
        "kind",
        choices=[
            "trace",
            "colon",
            "conductor",
            "resolve",
            "ext-ann",
            "tor-ann",
            "transpose",
            "enumerate-ideals",
        ],
    )
    pc.add_argument("--semigroup", required=True, help="generators, e.g. 2,3")
    pc.add_argument("--ideal", help="generator exponents, e.g. 0,1")
    pc.add_argument("--other", help="second ideal for colon")
    pc.add_argument("--length", type=int, default=4, help="resolution length")
    pc.add_argument("--index", type=int, default=1, help="homological index i")
    pc.add_argument("--prime", type=int, default=_default_prime())
    pc.set_defaults(fn=cmd_compute)

    pv = sub.add_parser("verify", help="run identity checks over the corpus")
    pv.add_argument("--max-genus", type=int, default=4)
    pv.add_argument("--checks", default="all", help=f"comma list from {','.join(CHECK_NAMES)} or 'all'")
    pv.add_argument("--prime", type=int, default=_default_prime())
    pv.add_argument("--imax", type=int, default=4)
    pv.add_argument("--report", help="write the full report to this path")
    pv.add_argument("--format", choices=["json", "csv"], default="json")
    pv.add_argument("--jobs", type=int, default=1)
    pv.set_defaults(fn=cmd_verify)

    pe = sub.add_parser("enumerate", help="list semigroups by genus")
    pe.add_argument("--max-genus", type=int, default=4)
    pe.set_defaults(fn=cmd_enumerate)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SemigroupError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
