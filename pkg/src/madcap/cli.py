"""Command-line front end: ``madcap {point,sweep,check,thresholds,additivity}``."""
from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import sys
from pathlib import Path

from .capacity import (
    QUANTITIES,
    CapacityPoint,
    c2_additivity_probe,
    evaluate,
    find_g2_population_threshold,
    find_q_threshold,
    grid,
    sweep,
)
from .channel import ChannelParams, self_check
from .ensembles import G1Params, G2Params, Populations
from .optimize import OptimizerConfig
from .qmat import DomainError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CHECK_TOL = 1e-12
DEFAULT_THRESHOLD_ETAS = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9"

ARGMAX_FIELDS = {
    "chi-g1": [f.name for f in dataclasses.fields(G1Params)],
    "chi-g2": [f.name for f in dataclasses.fields(G2Params)],
    "q-lwb": [f.name for f in dataclasses.fields(Populations)],
    "ce": [f.name for f in dataclasses.fields(Populations)],
    "q-upb": [],
}


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return f"{x:.12g}"


def parse_values(text: str) -> list[float]:
    """``0.3``, ``0,0.1,0.5`` or an inclusive range ``lo:hi:step``."""
    try:
        if ":" in text:
            lo, hi, step = (float(t) for t in text.split(":"))
            vals = list(grid(step, lo, hi))
        else:
            vals = [float(t) for t in text.split(",") if t.strip()]
    except (ValueError, DomainError) as exc:
        raise UsageError(f"cannot parse value list {text!r}: {exc}") from None
    if not vals or any(not 0.0 <= v <= 1.0 for v in vals):
        raise UsageError(f"values must be nonempty and lie in [0, 1]: {text!r}")
    return [float(v) for v in vals]


def read_config(path: str | None) -> dict[str, str]:
    """Parse a ``key = value`` file; blank lines and ``#`` comments are skipped."""
    if path is None:
        return {}
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from None
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key = value")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


def optimizer_config(args) -> OptimizerConfig:
    conf = read_config(args.config)
    fields = {f.name: f.type for f in dataclasses.fields(OptimizerConfig)}
    kw = {}
    for k, v in conf.items():
        if k not in fields:
            raise UsageError(f"unknown config key {k!r}; expected one of {sorted(fields)}")
        kw[k] = float(v) if k in ("f_tol", "x_tol") else int(v)
    for k in fields:
        if getattr(args, k, None) is not None:
            kw[k] = getattr(args, k)
    try:
        return OptimizerConfig(**kw)
    except (DomainError, TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def quantity_of(args) -> str:
    q = args.quantity_pos or args.quantity
    if q is None:
        raise UsageError("a quantity is required")
    if args.quantity_pos and args.quantity and args.quantity_pos != args.quantity:
        raise UsageError("conflicting quantities given")
    return q


def point_row(pt: CapacityPoint) -> list[str]:
    fields = pt.argmax_fields()
    row = [fmt(pt.eta), fmt(pt.mu), fmt(pt.value)]
    row += [fmt(fields[name]) for name in ARGMAX_FIELDS[pt.quantity]]
    row += [str(pt.evals), str(pt.converged).lower()]
    return row


def csv_header(quantity: str) -> list[str]:
    return ["eta", "mu", "value", *ARGMAX_FIELDS[quantity], "evals", "converged"]


def write_csv(points: list[CapacityPoint], quantity: str, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(csv_header(quantity))
    for pt in points:
        w.writerow(point_row(pt))


def read_csv(path) -> list[dict[str, float | bool]]:
    """Inverse of the sweep CSV writer (numbers as floats, converged as bool)."""
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            rows.append(
                {k: (v == "true") if k == "converged" else int(v) if k == "evals" else float(v)
                 for k, v in rec.items()}
            )
    return rows


def write_json(points: list[CapacityPoint], fh) -> None:
    json.dump([pt.to_dict() for pt in points], fh, indent=1)
    fh.write("\n")


def write_output(points, quantity, path: str, as_json: bool) -> None:
    """Write atomically-ish: on any I/O error the partial file is removed."""
    target = Path(path)
    try:
        with open(target, "w", newline="") as fh:
            if as_json:
                write_json(points, fh)
            else:
                write_csv(points, quantity, fh)
    except OSError:
        try:
            target.unlink()
        except OSError:
            pass
        raise


def cmd_point(args) -> int:
    q = quantity_of(args)
    cfg = optimizer_config(args)
    try:
        p = ChannelParams(args.eta, args.mu)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    kw = {"phase_search": True} if args.phase_search and q == "chi-g1" else {}
    pt = evaluate(q, p, cfg, **kw)
    if args.json:
        write_json([pt], sys.stdout)
        return EXIT_OK
    print(f"quantity   {pt.quantity}")
    print(f"eta        {fmt(pt.eta)}")
    print(f"mu         {fmt(pt.mu)}")
    print(f"value      {fmt(pt.value)}")
    for k, v in pt.argmax_fields().items():
        print(f"  {k:<8} {fmt(v)}")
    if pt.raw_value is not None and pt.raw_value != pt.value:
        print(f"raw value  {fmt(pt.raw_value)}")
    print(f"evals      {pt.evals}")
    print(f"restarts   {pt.restarts_used}")
    print(f"converged  {str(pt.converged).lower()}")
    if q == "q-lwb" and pt.value == 0.0:
        print("note: coherent information is not positive here; "
              "Q_lwb vanishes below the memory threshold")
    return EXIT_OK


def cmd_sweep(args) -> int:
    q = quantity_of(args)
    cfg = optimizer_config(args)
    if args.grid_step is not None and args.grid_step <= 0:
        raise UsageError("--grid-step must be positive")
    step = args.grid_step or 0.02
    etas = parse_values(args.eta) if args.eta else list(grid(step))
    mus = parse_values(args.mu) if args.mu else list(grid(step))
    kw = {"phase_search": True} if args.phase_search and q == "chi-g1" else {}
    points = sweep(q, etas, mus, cfg, jobs=args.jobs, **kw)
    if args.out is None:
        (write_json(points, sys.stdout) if args.json else write_csv(points, q, sys.stdout))
        return EXIT_OK
    as_json = args.json or args.out.endswith(".json")
    try:
        write_output(points, q, args.out, as_json)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(f"wrote {len(points)} rows to {args.out}")
    return EXIT_OK


def cmd_check(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    rep = self_check(args.trials, args.seed if args.seed is not None else 0)
    print(f"trials {rep.trials}")
    for name, r in rep.residuals().items():
        flag = "ok" if r <= CHECK_TOL else "FAIL"
        print(f"{name:<32} {r:.3e} {flag}")
    if rep.worst > CHECK_TOL:
        print(f"check failed: worst residual {rep.worst:.3e} > {CHECK_TOL:g}")
        return EXIT_FAIL
    return EXIT_OK


def _opt(x: float | None) -> str:
    return "none" if x is None else f"{x:.4f}"


def cmd_thresholds(args) -> int:
    cfg = optimizer_config(args)
    etas = parse_values(args.eta or DEFAULT_THRESHOLD_ETAS)
    rows = [(eta, find_g2_population_threshold(eta, cfg), find_q_threshold(eta, cfg)) for eta in etas]
    if args.json:
        json.dump([{"eta": e, "mu_th_g2": a, "mu_bar_th_q": b} for e, a, b in rows], sys.stdout, indent=1)
        print()
        return EXIT_OK
    print(f"{'eta':>6} {'mu_th_g2':>10} {'mu_bar_th_q':>12}")
    for eta, a, b in rows:
        print(f"{eta:>6.3f} {_opt(a):>10} {_opt(b):>12}")
    return EXIT_OK


def cmd_additivity(args) -> int:
    cfg = optimizer_config(args)
    etas = parse_values(args.eta or "0.2,0.5,0.8")
    reports = [c2_additivity_probe(eta, cfg) for eta in etas]
    if args.json:
        json.dump([dataclasses.asdict(r) for r in reports], sys.stdout, indent=1)
        print()
        return EXIT_OK
    print(f"{'eta':>6} {'chi_g1':>14} {'chi_g2':>14} {'2*C1':>14}  verdict")
    for r in reports:
        print(f"{r.eta:>6.3f} {fmt(r.chi_g1):>14} {fmt(r.chi_g2):>14} {fmt(r.two_c1):>14}  {r.verdict}")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _optimizer_flags(p):
    g = p.add_argument_group("optimizer")
    g.add_argument("--seed", type=int, help="base seed (default 0)")
    g.add_argument("--restarts", type=int)
    g.add_argument("--max-evals-per-restart", dest="max_evals_per_restart", type=int)
    g.add_argument("--f-tol", dest="f_tol", type=float)
    g.add_argument("--x-tol", dest="x_tol", type=float)
    g.add_argument("--config", help="key = value file with optimizer settings; flags take precedence")


def _quantity_flags(p):
    p.add_argument("quantity_pos", nargs="?", choices=QUANTITIES, metavar="QUANTITY",
                   help=f"one of {', '.join(QUANTITIES)}")
    p.add_argument("--quantity", choices=QUANTITIES)
    p.add_argument("--phase-search", action="store_true", help="also optimize the G1 phases")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="madcap", description="Capacity bounds of the two-qubit amplitude-damping channel with memory.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("point", help="evaluate one quantity at one (eta, mu)")
    _quantity_flags(p)
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--json", action="store_true")
    _optimizer_flags(p)
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("sweep", help="evaluate a quantity on an (eta, mu) grid")
    _quantity_flags(p)
    p.add_argument("--grid-step", type=float, help="step of the default [0, 1] grids (0.02)")
    p.add_argument("--eta", help="eta values: 0.3 | 0,0.1,0.5 | lo:hi:step")
    p.add_argument("--mu", help="mu values, same syntax as --eta")
    p.add_argument("--jobs", type=int, help="worker processes (default: all cores)")
    p.add_argument("--out", help="output file (.csv or .json); stdout if omitted")
    p.add_argument("--json", action="store_true")
    _optimizer_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("check", help="representation agreement and covariance residuals")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("thresholds", help="G2 population and Q_lwb memory thresholds")
    p.add_argument("--eta", help=f"eta values (default {DEFAULT_THRESHOLD_ETAS})")
    p.add_argument("--json", action="store_true")
    _optimizer_flags(p)
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("additivity", help="compare memoryless two-use bounds with 2*C1")
    p.add_argument("--eta", help="eta values (default 0.2,0.5,0.8)")
    p.add_argument("--json", action="store_true")
    _optimizer_flags(p)
    p.set_defaults(func=cmd_additivity)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", None) is not None and args.jobs < 1:
        parser.error("--jobs must be positive")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except BrokenPipeError:
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
