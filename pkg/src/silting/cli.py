"""Command-line interface: ``silt <verb> ...``.

Exit codes: 0 Holds or success, 1 Fails, 2 Inconclusive or bound exhausted,
3 input or usage error.  ``--json`` switches stdout to JSON.

Algebra arguments are JSON files or the name of a bundled fixture pack; module
arguments are JSON files or, with a pack, the name of one of its modules.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Sequence

from . import complexes as cx
from . import decisions as dc
from . import harness
from .algebra import AdmissibilityFailure, BasedAlgebra, EmptyQuiver, InvalidPresentation
from .fixtures import PACK_NAMES, FixtureError, load_algebra_file, load_pack, validate, validate_all
from .homology import describe, is_tau_n_rigid, min_resolution, pd_up_to, tau_n
from .linalg import parse_field
from .modules import InvalidModule, Module, NotAnnihilated
from .oracle import EnumerationConfig, WorkBoundExceeded, catalog
from .verdict import Outcome, Verdict, _jsonable

EXIT = {Outcome.HOLDS: 0, Outcome.FAILS: 1, Outcome.INCONCLUSIVE: 2}
USAGE_ERROR = 3

INPUT_ERRORS = (
    FixtureError, InvalidPresentation, AdmissibilityFailure, EmptyQuiver,
    InvalidModule, NotAnnihilated, ValueError,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--json", action="store_true", default=d(False), help="JSON on stdout")
    p.add_argument("--field", default=d(None), help="override the field: Q or Fp:<p>")
    p.add_argument("--seed", type=int, default=d(0), help="seed for randomised certificates")
    p.add_argument("--timings", action="store_true", default=d(False), help="record runtimes in reports")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="silt", description="Decide tau_n-rigid, silting and tilting properties of modules.")
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="verb", parser_class=_Parser, required=True)

    def verb(name, help_):
        p = sub.add_parser(name, help=help_)
        _common(p, suppress=True)
        return p

    p = verb("check", "decide a property of a module or complex")
    p.add_argument("property", choices=["tau-rigid", "tau-tilting", "n-tilting", "silting"])
    p.add_argument("-n", type=int, default=None)
    p.add_argument("-m", type=int, default=None)
    p.add_argument("--bound", type=int, default=None, help="coresolution bound for silting")
    p.add_argument("algebra")
    p.add_argument("object", help="module JSON, complex JSON, or a pack module name")

    p = verb("resolve", "minimal projective resolution and projective dimension")
    p.add_argument("-n", type=int, default=5, help="depth")
    p.add_argument("algebra")
    p.add_argument("module")

    p = verb("tau", "higher Auslander-Reiten translate tau_n")
    p.add_argument("-n", type=int, default=1)
    p.add_argument("algebra")
    p.add_argument("module")

    p = verb("homk", "dim Hom_K(X, Y[i]) in the homotopy category")
    p.add_argument("-i", type=int, default=0, help="shift")
    p.add_argument("-n", type=int, default=None, help="truncate module resolutions at -n")
    p.add_argument("algebra")
    p.add_argument("x")
    p.add_argument("y")

    p = verb("enum", "enumerate indecomposables up to a total dimension")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--rigid", default="1,2,3", help="comma-separated n for tau_n-rigidity flags")
    p.add_argument("algebra")

    p = verb("verify", "run a named suite over the bundled fixtures")
    p.add_argument("suite")

    p = verb("report", "run a suite and emit one record per check")
    p.add_argument("--suite", default="examples-all")
    p.add_argument("--format", choices=["json", "tsv"], default="json")
    p.add_argument("-o", "--output", default=None)
    return parser


# ---------------------------------------------------------------------------
# Input resolution
# ---------------------------------------------------------------------------


class Inputs:
    def __init__(self, algebra_arg: str, field):
        self.pack = None
        if algebra_arg in PACK_NAMES and not Path(algebra_arg).exists():
            self.pack = load_pack(algebra_arg, field)
            self.algebra: BasedAlgebra = self.pack.algebra
        else:
            self.algebra = load_algebra_file(algebra_arg, field)

    def _data(self, arg: str) -> dict | None:
        path = Path(arg)
        if path.exists():
            try:
                return json.loads(path.read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise FixtureError(f"cannot read {arg}: {exc}") from exc
        return None

    def module(self, arg: str) -> Module:
        data = self._data(arg)
        if data is None:
            if self.pack is not None and arg in self.pack.modules:
                return self.pack.modules[arg]
            raise FixtureError(f"no module file or pack module named {arg!r}")
        validate(data, "module")
        return Module.from_json(self.algebra, data, name=Path(arg).name.split(".")[0])

    def complex(self, arg: str, n: int | None) -> cx.ProjComplex:
        data = self._data(arg)
        if data is not None and "terms" in data:
            validate(data, "complex")
            P = cx.ProjComplex.from_json(self.algebra, data, name=Path(arg).name.split(".")[0])
            P.check()
            return P
        if n is None:
            raise UsageError("a module argument needs -n to form its truncated resolution")
        return cx.from_resolution(self.module(arg), n)


# ---------------------------------------------------------------------------
# Verbs
# ---------------------------------------------------------------------------


def _require(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required")
    if value < 1:
        raise UsageError(f"{flag} must be at least 1")
    return value


def _verdict_text(v: Verdict) -> str:
    lines = [v.outcome.value]
    for k, x in v.witness.items():
        lines.append(f"  {k}: {json.dumps(_jsonable(x))}")
    return "\n".join(lines)


def cmd_check(args, inp: Inputs):
    if args.property == "silting":
        P = inp.complex(args.object, args.n)
        v = cx.is_silting(P, args.bound)
        return v.outcome, v.to_json(), _verdict_text(v)
    M = inp.module(args.object)
    n = _require(args.n, "-n")
    if args.property == "tau-rigid":
        v = is_tau_n_rigid(M, n)
    elif args.property == "n-tilting":
        v = dc.is_n_tilting(M, n)
    elif args.m is not None:
        rep = dc.is_tau_nm_tilting(M, n, _require(args.m, "-m"))
        data = rep.to_json()
        text = [f"{rep.outcome.outcome.value}: tau_{{{n},{args.m}}}-tilting"]
        for key in ("tau_n_rigid", "tau_n_tilting", "tau_m_rigid_gamma", "m_tilting_gamma"):
            text.append(f"  {key}: {data[key]['outcome']}")
        text.append(f"  gamma: dim {rep.gamma['dim']}, annihilator {rep.annihilator}")
        return rep.outcome.outcome, data, "\n".join(text)
    else:
        v = dc.is_tau_n_tilting(M, n)
    return v.outcome, v.to_json(), _verdict_text(v)


def cmd_resolve(args, inp: Inputs):
    M = inp.module(args.module)
    res = min_resolution(M, args.n)
    res.check()
    pd = pd_up_to(M, args.n)
    data = {"module": describe(M), "shape": res.shape(), "terms": [[M.algebra.vertices[v] for v in t] for t in res.terms], "pd": pd.to_json()}
    text = f"{data['module']}: {data['shape']}\npd: {json.dumps(data['pd'])}"
    return Outcome.HOLDS, data, text


def cmd_tau(args, inp: Inputs):
    M = inp.module(args.module)
    T = tau_n(M, _require(args.n, "-n"))
    data = {"module": describe(M), "n": args.n, "tau_n": T.to_json(), "describe": describe(T)}
    return Outcome.HOLDS, data, f"tau_{args.n}({data['module']}) = {data['describe']}\n{json.dumps(data['tau_n'])}"


def cmd_homk(args, inp: Inputs):
    X, Y = inp.complex(args.x, args.n), inp.complex(args.y, args.n)
    hs = cx.hom_homotopy(X, Y, args.i)
    data = {"shift": args.i, "dim": hs.dim}
    return Outcome.HOLDS, data, f"dim Hom_K(X, Y[{args.i}]) = {hs.dim}"


def cmd_enum(args, inp: Inputs):
    ns = tuple(int(x) for x in args.rigid.split(",") if x)
    cfg = EnumerationConfig(inp.algebra, args.bound, seed=args.seed)
    cfg.validate()
    data = catalog(cfg, ns)
    lines = [f"{len(data['modules'])} indecomposables of total dimension <= {args.bound}"]
    for row in data["modules"]:
        flags = " ".join(f"tau{n}:{'y' if ok else 'n'}" for n, ok in row["tau_rigid"].items())
        lines.append(f"  {row['name']:24s} {row['dims']} {flags}")
    return Outcome.HOLDS, data, "\n".join(lines)


def _records(args) -> list[harness.Record]:
    return harness.run_suite(args.suite, args.field)


def cmd_verify(args, _inp):
    records = _records(args)
    agg = harness.aggregate(records)
    data = {"suite": args.suite, "outcome": agg.value, "records": [r.to_json(args.timings) for r in records]}
    lines = [f"{r.verdict.outcome.value:12s} {r.check_id}" for r in records]
    lines.append(f"{args.suite}: {agg.value} ({len(records)} checks)")
    return agg, data, "\n".join(lines)


def cmd_report(args, _inp):
    records = _records(args)
    rows = [r.to_json(args.timings) for r in records]
    if args.format == "tsv":
        buf = io.StringIO()
        w = csv.writer(buf, delimiter="\t", lineterminator="\n")
        w.writerow(["check-id", "inputs", "outcome", "certificate-digest", "runtime-ms"])
        for r in rows:
            w.writerow([r["check-id"], json.dumps(r["inputs"], sort_keys=True), r["outcome"], r["certificate-digest"],
                        "" if r["runtime-ms"] is None else r["runtime-ms"]])
        text = buf.getvalue()
    else:
        text = json.dumps(rows, indent=2, sort_keys=True) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    agg = harness.aggregate(records)
    return agg, rows, text.rstrip("\n")


VERBS = {
    "check": cmd_check, "resolve": cmd_resolve, "tau": cmd_tau, "homk": cmd_homk,
    "enum": cmd_enum, "verify": cmd_verify, "report": cmd_report,
}


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    """Parse ``argv``, run the verb and print its result; returns the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        validate_all()
        args = build_parser().parse_args(argv)
        if args.field is not None:
            parse_field(args.field)
        if args.verb in ("verify", "report"):
            suite = args.suite
            if suite not in harness.SUITES:
                raise UsageError(f"unknown suite {suite!r}; expected one of {', '.join(harness.SUITES)}")
            inp = None
        else:
            inp = Inputs(args.algebra, args.field)
        outcome, data, text = VERBS[args.verb](args, inp)
    except UsageError as exc:
        print(f"silt: usage error: {exc}", file=err)
        return USAGE_ERROR
    except WorkBoundExceeded as exc:
        print(f"silt: work bound exceeded: {exc}", file=err)
        return EXIT[Outcome.INCONCLUSIVE]
    except INPUT_ERRORS as exc:
        print(f"silt: input error: {exc}", file=err)
        return USAGE_ERROR
    # report output is already machine-readable in the requested format
    if args.json and args.verb != "report":
        print(json.dumps(_jsonable(data), indent=2, sort_keys=True), file=out)
    else:
        print(text, file=out)
    return EXIT[outcome]


def main() -> None:
    sys.exit(run())
