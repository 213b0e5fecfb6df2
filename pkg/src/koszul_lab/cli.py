"""Command-line interface.

Exit codes: 0 all checks pass, 1 some check failed, 2 degenerate-input
retries exhausted, 3 usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import models as mdl
from .errors import (
    CharacteristicBoundError,
    FormatVersionMismatch,
    InsufficientPoints,
    KoszulLabError,
    MalformedFile,
    RetriesExhausted,
)
from .field import MAX_PRIME, is_prime
from .gradedring import GradedRing
from .koszul import betti_table
from .verify import SUITES, SuiteReport, run_suite

EXIT_OK, EXIT_FAIL, EXIT_RETRIES, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _prime(s: str) -> int:
    try:
        p = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{s!r} is not an integer") from None
    if not is_prime(p) or p > MAX_PRIME:
        raise argparse.ArgumentTypeError(f"{p} is not a prime below {MAX_PRIME}")
    return p


def _seed(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{s!r} is not an integer") from None
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="koszul-lab", description="Koszul cohomology of canonical curves and K3 surfaces over F_q.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate a model and write it as JSON")
    g.add_argument("--genus", type=int, required=True, choices=(4, 6, 8))
    g.add_argument("--variant", required=True, choices=("ci", "grass", "sextic", "k3"))
    g.add_argument("--p", type=_prime, required=True)
    g.add_argument("--m", type=_positive, default=None, help="fixed extension degree (default: escalate from 1)")
    g.add_argument("--seed", type=_seed, required=True)
    g.add_argument("--points", action="store_true", help="attach sample points for the evaluation representation")
    g.add_argument("--out", required=True)

    b = sub.add_parser("betti", help="Betti table of a model")
    b.add_argument("--model", required=True)
    b.add_argument("--qmax", type=int, default=2, help="highest row q of the table")
    b.add_argument("--rep", choices=("presentation", "evaluation"), default=None)
    b.add_argument("--format", choices=("json", "table"), default="json")

    pe = sub.add_parser("pencils", help="extract the five g^1_4 pencils of a sextic-built genus-6 model")
    pe.add_argument("--model", required=True)
    pe.add_argument("--divisors", type=_positive, default=3)
    pe.add_argument("--seed", type=_seed, default=0)

    v = sub.add_parser("verify", help="run an experiment suite")
    v.add_argument("suite", choices=SUITES + ("all",))
    v.add_argument("--p", type=_prime, required=True)
    v.add_argument("--seed", type=_seed, required=True)
    v.add_argument("--genus", type=int, choices=(4, 6, 8), default=6)
    v.add_argument("--variant", choices=("ci", "grass", "sextic"), default=None)
    v.add_argument("--divisors", type=int, default=3)
    v.add_argument("--force", action="store_true", help="run below the characteristic bound, recording observations")
    v.add_argument("--timing", action="store_true", help="record wall time (makes output non-reproducible)")
    v.add_argument("--format", choices=("json", "table"), default="json")

    r = sub.add_parser("report", help="render a saved report")
    r.add_argument("--in", dest="infile", required=True)
    r.add_argument("--format", choices=("json", "table"), default="table")
    return ap


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _load_model(path: str):
    if not Path(path).is_file():
        raise UsageError(f"no such model file: {path}")
    return mdl.load_model(path)


def _cmd_gen(args) -> int:
    tag = {(4, "ci"): "canonical-g4", (6, "grass"): "canonical-g6-grass", (6, "sextic"): "canonical-g6-sextic",
           (8, "grass"): "canonical-g8-grass", (6, "k3"): "k3-g6"}.get((args.genus, args.variant))
    if tag is None:
        raise UsageError(f"no construction for genus {args.genus} variant {args.variant}")

    def build(F):
        model = mdl.build_tagged(tag, F, args.seed)
        if args.points and not model.has_points:
            model = mdl.attach_points(model, args.seed)
        return model

    if args.m is not None:
        model, _ = mdl.escalate(args.p, build, m_start=args.m, m_max=args.m)
    else:
        model, _ = mdl.escalate(args.p, build)
    mdl.save_model(args.out, model)
    print(_dump({"out": args.out, "construction": tag, "field": model.field.spec(),
                 "generators": len(model.generators),
                 "points": 0 if model.points is None else len(model.points)}))
    return EXIT_OK


def _cmd_betti(args) -> int:
    model = _load_model(args.model)
    if args.qmax < 0:
        raise UsageError("--qmax must be non-negative")
    rep = args.rep or ("presentation" if model.has_presentation else "evaluation")
    ring = GradedRing(model, rep)
    table = betti_table(ring, range(0, model.n + 1), range(0, args.qmax + 1))
    if args.format == "table":
        print(table.to_text())
    else:
        print(_dump(table.to_json()))
    return EXIT_OK


def _cmd_pencils(args) -> int:
    from .pencils import enumerate_pencils, sample_divisors, special_subspace

    model = _load_model(args.model)
    try:
        sextic = mdl.sextic_of(model)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    F = model.field
    out = []
    for i, pc in enumerate(enumerate_pencils(sextic)):
        rng = np.random.default_rng([args.seed, 0x9E0, i])
        divs = sample_divisors(sextic, pc, args.divisors, rng)
        out.append({
            "pencil": pc.to_json(F),
            "divisors": [dict(d.to_json(F), seed=args.seed) for d in divs],
            "special_subspaces": [special_subspace(sextic, d).to_json(F) for d in divs],
        })
    print(_dump({"field": F.spec(), "pencils": out}))
    return EXIT_OK


def _cmd_verify(args) -> int:
    names = SUITES if args.suite == "all" else (args.suite,)
    reports = []
    for name in names:
        rep = run_suite(name, args.p, args.seed, force=args.force, timing=args.timing, genus=args.genus,
                        variant=args.variant, divisors=args.divisors)
        reports.append(rep)
    if args.format == "table":
        print("\n\n".join(r.to_text() for r in reports))
    elif len(reports) == 1:
        print(_dump(reports[0].to_json()))
    else:
        print(_dump({"reports": [r.to_json() for r in reports]}))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _cmd_report(args) -> int:
    path = Path(args.infile)
    if not path.is_file():
        raise UsageError(f"no such report file: {path}")
    try:
        d = json.loads(path.read_text())
        docs = d["reports"] if "reports" in d else [d]
        reports = [SuiteReport.from_json(x) for x in docs]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise MalformedFile(f"{path}: not a suite report ({exc})") from None
    if args.format == "table":
        print("\n\n".join(r.to_text() for r in reports))
    else:
        print(_dump(d))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


COMMANDS = {"gen": _cmd_gen, "betti": _cmd_betti, "pencils": _cmd_pencils, "verify": _cmd_verify,
            "report": _cmd_report}


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "verify" and args.divisors < 3:
        print("koszul-lab: error: --divisors must be at least 3", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (UsageError, CharacteristicBoundError, MalformedFile, FormatVersionMismatch) as exc:
        print(f"koszul-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RetriesExhausted, InsufficientPoints) as exc:
        print(f"koszul-lab: retries exhausted: {exc}", file=sys.stderr)
        return EXIT_RETRIES
    except KoszulLabError as exc:
        print(f"koszul-lab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
