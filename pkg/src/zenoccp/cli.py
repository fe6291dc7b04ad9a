"""Command-line front end.

Subcommands: exact, montecarlo, table2, sweep-scaling, efficiency.
Exit codes: 0 success, 1 validation failure, 2 reproduction check failed, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
from pathlib import Path
import sys
import warnings

import numpy as np

from . import schemas
from .batch import run_batch
from .bounds import (
    classical_error_estimate,
    p1_success_bound,
    pe_success_bound,
    scaling_slopes,
)
from .experiment import DatasetError, EXPERIMENT, load_table2, reproduce_report
from .model import (
    CcpInstance,
    PromiseViolation,
    RegimeWarning,
    assignment_from_json,
    ground_truth,
    sample_assignment,
    validate_instance,
)
from .protocols import (
    QUANTUM,
    ProtocolKind,
    average_success,
    efficiency_adjusted_success,
    efficiency_crossover,
    exact_success,
    worst_case_success,
)

EXIT_OK, EXIT_VALIDATION, EXIT_REPRO, EXIT_IO = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, msg: str, code: int):
        super().__init__(msg)
        self.code = code


def _instance(args, **override) -> CcpInstance:
    vals = {"N": args.N, "M": args.M, "d": args.d, "mu": args.mu, **override}
    inst = CcpInstance(*(int(vals[k]) for k in ("N", "M", "d", "mu")))
    res = validate_instance(inst)
    if not res.ok:
        raise CliError("invalid instance: " + "; ".join(res.violations), EXIT_VALIDATION)
    return inst


def _grid(text: str, cast=int) -> list:
    if ":" in text:
        lo, hi, step = (float(v) for v in text.split(":"))
        vals = np.arange(lo, hi + step / 2, step)
        return [cast(round(v, 10)) for v in vals]
    return [cast(v) for v in text.split(",") if v.strip()]


def _csv(header, rows, comments=()) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    for c in comments:
        buf.write(f"# {c}\n")
    return buf.getvalue()


def _fmt(x) -> str:
    if x is None:
        return ""
    return f"{x:.12g}" if isinstance(x, float) else str(x)


def _protocols(text: str) -> list[ProtocolKind]:
    try:
        return [ProtocolKind.parse(p.strip()) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from exc


def _bound_for(kind: ProtocolKind, inst: CcpInstance) -> float:
    if kind is ProtocolKind.CLASSICAL:
        return 1 - classical_error_estimate(inst)
    return p1_success_bound(inst) if kind is ProtocolKind.P1 else pe_success_bound(inst)


# ---------------------------------------------------------------- commands


def cmd_exact(args) -> str:
    if args.row_from_table2 is not None:
        try:
            row = next(r for r in load_table2() if r.index == args.row_from_table2)
        except StopIteration:
            raise CliError(f"Table 2 has no row {args.row_from_table2}", EXIT_VALIDATION) from None
        inst = EXPERIMENT
        items = [(f"table2-row-{row.index}", row.assignment())]
    elif args.assignment is not None:
        text = args.assignment
        if text.startswith("@"):
            text = _read(text[1:])
        try:
            inst, a = assignment_from_json(text)
        except (PromiseViolation, ValueError, KeyError) as exc:
            raise CliError(f"bad assignment: {exc}", EXIT_VALIDATION) from exc
        items = [("given", a)]
    else:
        inst = _instance(args)
        rng = np.random.default_rng(args.seed)
        items = [("average", None)] + [(f"sample-{i}", sample_assignment(inst, rng)) for i in range(args.samples)]
    out = []
    for label, a in items:
        rec = {
            "assignment": label if a is None else a.to_dict(inst),
            "truth": None if a is None else ground_truth(a, inst),
            "B": None if a is None else a.B,
        }
        for kind in ProtocolKind:
            rec["classical" if kind is ProtocolKind.CLASSICAL else kind.value] = exact_success(kind, inst, a)
        rec["classical_estimate"] = 1 - classical_error_estimate(inst)
        rec["bound_pe"] = pe_success_bound(inst)
        rec["bound_p1"] = p1_success_bound(inst)
        out.append(rec)
    if args.json:
        return json.dumps(out, indent=2)
    cols = list(schemas.EXACT_ROW["required"])
    rows = [[json.dumps(r[c]) if isinstance(r[c], dict) else _fmt(r[c]) for c in cols] for r in out]
    return _csv(cols, rows)


def cmd_montecarlo(args) -> str:
    if args.trials < 1:
        raise CliError("montecarlo needs --trials >= 1", EXIT_VALIDATION)
    kinds = _protocols(args.protocols)
    grid = _grid(args.grid, float if args.vary == "eta" else int) if args.grid else [getattr(args, args.vary)]
    rows, skipped = [], []
    for val in grid:
        if args.vary == "eta":
            inst, eta = _instance(args), float(val)
        else:
            try:
                inst = _instance(args, **{args.vary: val})
            except CliError as exc:
                skipped.append(f"skipped {args.vary}={val}: {exc}")
                continue
            eta = args.eta
        for kind in kinds:
            res = run_batch(kind, inst, args.trials, args.seed, eta=eta, workers=args.workers)
            exact = average_success(kind, inst)
            if eta is not None:
                exact = efficiency_adjusted_success(exact, kind, inst, eta)
            rows.append([args.vary, _fmt(val), kind.value, res.trials, _fmt(res.rate), _fmt(res.stderr),
                         _fmt(exact), _fmt(_bound_for(kind, inst))])
    return _csv(schemas.MONTECARLO_COLUMNS, rows, skipped)


def cmd_table2(args) -> str:
    rep = reproduce_report(args.dataset)
    text = rep.to_json(indent=2) if args.json else rep.to_text()
    if not rep.ok:
        raise CliError(text, EXIT_REPRO)
    return text


def cmd_sweep_scaling(args) -> str:
    Ns = _grid(args.grid) if args.grid else list(range(30, 301, 30))
    try:
        fit = scaling_slopes(Ns, args.M, args.d, args.mu)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from exc
    rows = []
    for N, ce, qe in zip(fit.Ns, fit.classical_error, fit.quantum_error):
        inst = CcpInstance(N, args.M, args.d, args.mu)
        rows.append([N, _fmt(ce), _fmt(qe), _fmt(classical_error_estimate(inst)), _fmt(1 - p1_success_bound(inst))])
    comments = [f"classical_slope={fit.classical_slope:.6f}", f"quantum_slope={fit.quantum_slope:.6f}"]
    if args.json:
        return json.dumps({"rows": [dict(zip(schemas.SCALING_COLUMNS, r)) for r in rows],
                           "classical_slope": fit.classical_slope, "quantum_slope": fit.quantum_slope}, indent=2)
    return _csv(schemas.SCALING_COLUMNS, rows, comments)


def cmd_efficiency(args) -> str:
    inst = _instance(args)
    etas = _grid(args.grid, float) if args.grid else [round(e, 4) for e in np.linspace(0, 1, 21)]
    ideal = {ProtocolKind.CLASSICAL: average_success(ProtocolKind.CLASSICAL, inst)}
    for kind in QUANTUM:
        ideal[kind] = worst_case_success(kind, inst).success
    rows = [[_fmt(float(eta)), kind.value, _fmt(ideal[kind]),
             _fmt(efficiency_adjusted_success(ideal[kind], kind, inst, float(eta)))]
            for eta in etas for kind in ProtocolKind]
    cross = {k.value: efficiency_crossover(ideal[ProtocolKind.P1], ideal[k], k, inst)
             for k in (ProtocolKind.P2, ProtocolKind.PE)}
    if args.json:
        return json.dumps({"rows": [dict(zip(schemas.EFFICIENCY_COLUMNS, r)) for r in rows],
                           "crossover_p1_vs": cross}, indent=2)
    comments = [f"crossover_P1_vs_{k}={'none' if v is None else f'{v:.8f}'}" for k, v in cross.items()]
    return _csv(schemas.EFFICIENCY_COLUMNS, rows, comments)


# ---------------------------------------------------------------- plumbing


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO) from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--N", type=int, default=60)
    common.add_argument("--M", type=int, default=3)
    common.add_argument("--d", type=int, default=2)
    common.add_argument("--mu", type=int, default=1)
    common.add_argument("--eta", type=float, default=None, help="detector efficiency in [0, 1]")
    common.add_argument("--trials", type=int, default=0)
    common.add_argument("--seed", type=int, default=0, help="64-bit master seed")
    common.add_argument("--json", action="store_true")
    common.add_argument("--out", type=str, default=None, help="write output to this path")

    p = argparse.ArgumentParser(prog="zenoccp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("exact", parents=[common], help="exact success of all protocols")
    s.add_argument("--row-from-table2", type=int, default=None)
    s.add_argument("--assignment", default=None, help="assignment JSON, or @path")
    s.add_argument("--samples", type=int, default=0, help="also evaluate this many sampled assignments")
    s.set_defaults(func=cmd_exact)

    s = sub.add_parser("montecarlo", parents=[common], help="sampled runs against exact values")
    s.add_argument("--vary", choices=["N", "M", "d", "mu", "eta"], default="N")
    s.add_argument("--grid", default=None, help="comma list or lo:hi:step")
    s.add_argument("--protocols", default="classical,PE,P1,P2")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_montecarlo)

    s = sub.add_parser("table2", parents=[common], help="reproduce the experimental table")
    s.add_argument("--dataset", default=None, help="alternative dataset path (checksum still enforced)")
    s.set_defaults(func=cmd_table2)

    s = sub.add_parser("sweep-scaling", parents=[common], help="error vs N with log-log slopes")
    s.add_argument("--grid", default=None, help="N values, comma list or lo:hi:step")
    s.set_defaults(func=cmd_sweep_scaling)

    s = sub.add_parser("efficiency", parents=[common], help="detector-efficiency adjusted success")
    s.add_argument("--grid", default=None, help="eta values, comma list or lo:hi:step")
    s.set_defaults(func=cmd_efficiency)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    code = EXIT_OK
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        try:
            text = args.func(args)
        except CliError as exc:
            text, code = str(exc), exc.code
        except DatasetError as exc:
            text, code = str(exc), EXIT_IO
        except PromiseViolation as exc:
            text, code = f"promise violation: {exc}", EXIT_VALIDATION
    if args.out and code in (EXIT_OK, EXIT_REPRO):
        try:
            Path(args.out).write_text(text if text.endswith("\n") else text + "\n")
        except OSError as exc:
            print(f"cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        print(text, file=sys.stdout if code in (EXIT_OK, EXIT_REPRO) else sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
