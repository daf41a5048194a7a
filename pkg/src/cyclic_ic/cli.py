"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 a verification check failed.
SNR/INR are given in dB on the command line; the library works in linear scale.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

import numpy as np

from .channel import (
    ChannelError,
    Regime,
    classify_regime,
    db_to_linear,
    etw_closed_form,
    etw_split,
    hk_params,
    make_channel,
    make_split,
    outer_params,
    private_only_split,
    useful_inequalities,
)
from .fourier_motzkin import project_to_rates, remove_redundant
from .gdof import gdof_sweep
from .polyhedra import certified_gap, regions_equal, slice_2d
from .regions import (
    GapReport,
    RegimeError,
    StructureError,
    achievable_region,
    match_families,
    outer_region,
    strong_region,
    ts_region_3,
)
from .sampling import make_rng, random_weak_channel
from .system import FAMILY_ORDER, InequalitySystem, make_row

EXIT_OK, EXIT_INVALID, EXIT_VERIFY = 0, 1, 2

THEOREM_GAP = {"hk": 2.0, "ts3": 1.5}


def _num(x: float) -> str:
    return "%.17g" % x


def render_json(sys: InequalitySystem) -> str:
    """Serialize with fixed key order, 17 significant digits and stable row order."""
    rows = sorted(sys.rows, key=lambda r: FAMILY_ORDER[r.family])
    parts = []
    for row in rows:
        params = ",".join(f"{json.dumps(key)}:{int(val)}" for key, val in row.params)
        parts.append(
            '{"coeffs":[' + ",".join(str(c) for c in row.coeffs) + "],"
            f'"rhs":{_num(row.rhs)},"family":{json.dumps(row.family)},"params":{{{params}}}}}'
        )
    names = ",".join(json.dumps(v) for v in sys.vars)
    return '{"vars":[' + names + '],"rows":[' + ",".join(parts) + "]}"


def parse_json(text: str) -> InequalitySystem:
    data = json.loads(text)
    rows = [make_row(r["coeffs"], float(r["rhs"]), r["family"], r.get("params", {})) for r in data["rows"]]
    return InequalitySystem(tuple(data["vars"]), tuple(rows))


def render_gap_json(report: GapReport) -> str:
    fams = []
    for f in report.families:
        fams.append({
            "family": f.family,
            "params": f.params,
            "l": f.l,
            "delta": f.delta,
            "bound": f.bound,
            "proof_bound": f.proof_bound,
            "pass": f.passed,
        })
    doc = {
        "regime": report.regime.value if report.regime else None,
        "pipeline": report.pipeline,
        "certified_b": report.certified_b,
        "families": fams,
    }
    return json.dumps(doc)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _scenario_args(p: argparse.ArgumentParser, split: bool = True) -> None:
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--snr-db", type=_floats, required=True)
    p.add_argument("--inr-db", type=_floats, required=True)
    if split:
        p.add_argument("--split", default="etw",
                       help="etw | private-only | comma list of linear private INRs")


def _out_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default="-", help="output file (default: stdout)")


def _channel(args):
    return make_channel(args.k, db_to_linear(args.snr_db), db_to_linear(args.inr_db))


def _split(ch, spec: str):
    if spec == "etw":
        return etw_split(ch)
    if spec == "private-only":
        return private_only_split(ch)
    try:
        values = _floats(spec)
    except argparse.ArgumentTypeError as exc:
        raise ValueError(f"--split must be etw, private-only or a list of numbers: {exc}")
    return make_split(ch, values)


def _write(path: str, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _region_for(args, kind: str) -> InequalitySystem:
    ch = _channel(args)
    if kind == "region":
        return achievable_region(hk_params(ch, _split(ch, args.split)), ch.k)
    if kind == "outer":
        regime = classify_regime(ch)
        if regime is not Regime.WEAK:
            print(f"note: outer bound is proved for the weak regime; channel is {regime.value}", file=sys.stderr)
        return outer_region(outer_params(ch), ch.k)
    if kind == "ts3":
        return ts_region_3(hk_params(ch, _split(ch, args.split)))
    if kind == "strong":
        region = strong_region(ch)
        return remove_redundant(region) if getattr(args, "prune", False) else region
    raise ValueError(kind)


def cmd_region(args) -> int:
    _write(args.out, render_json(_region_for(args, args.command)))
    return EXIT_OK


def cmd_gap(args) -> int:
    ch = _channel(args)
    regime = classify_regime(ch)
    if regime is Regime.MIXED:
        raise RegimeError("no outer bound is available in the mixed regime")
    if regime is Regime.WEAK:
        hk = hk_params(ch, _split(ch, args.split))
        pipeline = "ts3" if args.ts else "hk"
        inner = ts_region_3(hk) if args.ts else achievable_region(hk, ch.k)
        outer = outer_region(outer_params(ch), ch.k)
        families = match_families(inner, outer, ch.k, time_sharing=args.ts)
        b = certified_gap(inner, outer, ch.k)
        report = GapReport(families, regime, b, pipeline)
        ok = report.passed and b <= THEOREM_GAP[pipeline] + 1e-9
    else:
        # capacity is known: inner and outer coincide
        region = strong_region(ch)
        report = GapReport([], regime, certified_gap(region, region, ch.k), "strong")
        ok = True
    _write(args.out, render_gap_json(report))
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_verify_fm(args) -> int:
    if args.k < 2 or args.trials < 1:
        raise ValueError("need --k >= 2 and --trials >= 1")
    rng = make_rng(args.seed)
    for trial in range(args.trials):
        ch = random_weak_channel(rng, args.k)
        hk = hk_params(ch, etw_split(ch))
        if not regions_equal(project_to_rates(hk, args.k), achievable_region(hk, args.k)):
            print(f"verify-fm FAILED: seed={args.seed} trial={trial} snr={ch.snr.tolist()} "
                  f"inr={ch.inr.tolist()}", file=sys.stderr)
            return EXIT_VERIFY
    print(f"verify-fm ok: k={args.k} trials={args.trials} seed={args.seed}")
    return EXIT_OK


def cmd_gdof(args) -> int:
    if args.steps < 1 or args.alpha_min < 0 or args.alpha_max < args.alpha_min:
        raise ValueError("need steps >= 1 and 0 <= alpha-min <= alpha-max")
    alphas = np.linspace(args.alpha_min, args.alpha_max, args.steps)
    snr = float(db_to_linear(args.snr_db))
    points = gdof_sweep(args.k, alphas, snr)
    rows = [(p.alpha, float(args.snr_db), p.dsym_lower, p.dsym_upper, p.dsym_formula) for p in points]
    _write(args.out, _csv(["alpha", "snr_db", "dsym_lower", "dsym_upper", "dsym_formula"], rows))
    return EXIT_OK


def cmd_slice(args) -> int:
    region = _region_for(args, args.region)
    poly = slice_2d(region, args.i - 1, args.j - 1, args.fix or [])
    if not poly.feasible:
        print("slice is empty: fixed coordinates are infeasible", file=sys.stderr)
    _write(args.out, _csv(["x", "y"], [(float(x), float(y)) for x, y in poly.vertices]))
    return EXIT_OK


def cmd_check_ineq(args) -> int:
    ch = _channel(args)
    hk = etw_closed_form(ch) if args.form == "closed" else hk_params(ch, etw_split(ch))
    checks = useful_inequalities(ch, hk, outer_params(ch))
    doc = {
        "regime": classify_regime(ch).value,
        "form": args.form,
        "checks": [{"name": c.name, "i": c.user, "value": c.value, "bound": c.bound,
                    "relation": c.relation, "pass": c.passed} for c in checks],
        "pass": all(c.passed for c in checks),
    }
    _write(args.out, json.dumps(doc))
    return EXIT_OK if doc["pass"] else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cyclic-ic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, text in (("region", "Han-Kobayashi achievable region"),
                       ("outer", "weak-regime outer bound"),
                       ("ts3", "three-user time-sharing region"),
                       ("strong", "strong-regime capacity region")):
        p = sub.add_parser(name, help=text)
        _scenario_args(p, split=name in ("region", "ts3"))
        _out_arg(p)
        if name == "strong":
            p.add_argument("--prune", action="store_true", help="drop redundant rows")
        p.set_defaults(func=cmd_region)

    p = sub.add_parser("gap", help="family deltas and certified per-user gap")
    _scenario_args(p)
    p.add_argument("--ts", action="store_true", help="use the K=3 time-sharing region as inner bound")
    _out_arg(p)
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("verify-fm", help="Fourier-Motzkin oracle vs closed form on random weak channels")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify_fm)

    p = sub.add_parser("gdof", help="symmetric GDoF curve as CSV")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha-min", type=float, default=0.0)
    p.add_argument("--alpha-max", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=21)
    p.add_argument("--snr-db", type=float, required=True)
    _out_arg(p)
    p.set_defaults(func=cmd_gdof)

    p = sub.add_parser("slice", help="2-D cross-section polygon as CSV")
    _scenario_args(p)
    p.add_argument("--region", choices=("region", "outer", "ts3", "strong"), default="region")
    p.add_argument("--i", type=int, required=True, help="1-based x-axis user")
    p.add_argument("--j", type=int, required=True, help="1-based y-axis user")
    p.add_argument("--fix", type=_floats, default=None,
                   help="rates of the remaining users, in index order")
    _out_arg(p)
    p.set_defaults(func=cmd_slice)

    p = sub.add_parser("check-ineq", help="per-user outer-vs-achievable term inequalities")
    _scenario_args(p, split=False)
    p.add_argument("--form", choices=("closed", "general"), default="closed",
                   help="closed: 1-bit-floor ETW closed form; general: exact split evaluation")
    _out_arg(p)
    p.set_defaults(func=cmd_check_ineq)
    return parser


# flags whose values may start with "-" (negative dB, lists like -3,-3)
_VALUE_FLAGS = ("--snr-db", "--inr-db", "--fix", "--split", "--alpha-min", "--alpha-max")


def _attach_values(argv: Sequence[str]) -> list[str]:
    """Rewrite ``--flag value`` as ``--flag=value`` so argparse accepts negative values."""
    out, idx = [], 0
    argv = list(argv)
    while idx < len(argv):
        tok = argv[idx]
        if tok in _VALUE_FLAGS and idx + 1 < len(argv):
            out.append(f"{tok}={argv[idx + 1]}")
            idx += 2
        else:
            out.append(tok)
            idx += 1
    return out


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(_attach_values(sys.argv[1:] if argv is None else argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ChannelError, RegimeError, StructureError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
