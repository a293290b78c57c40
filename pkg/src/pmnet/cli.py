"""Command-line front end: run, sweep, generate, validate.

Exit codes: 0 success, 1 validation error, 2 simulation abort.  The default
output directory comes from ``PMNET_OUT_DIR`` (falling back to the working
directory).  Trace files are byte-reproducible for a fixed (scenario,
controller, seed) triple.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .scenario import (ScenarioError, parse_scenario, apply_overrides,
                       generate_scenario, write_scenario, CONTROLLER_TYPES,
                       NOISE_MODELS)
from .simulator import run, SimulationAbort, SimulationResult
from .sweep import run_sweep, AXES

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_ABORT = 2


def _out_dir(arg: str | None) -> Path:
    base = arg or os.environ.get("PMNET_OUT_DIR") or "."
    p = Path(base)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_trace(res: SimulationResult, path: Path, target_ids) -> None:
    """Strictly time-ordered CSV mirror of the in-memory event log."""
    lines = ["time,kind,agent,target," + ",".join(f"R_{i}"
                                                  for i in target_ids)]
    for ev in res.events:
        row = [_fmt(ev.time), ev.kind, _fmt(ev.agent), _fmt(ev.target)]
        row += [repr(v) for v in ev.R]
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n")


def write_result(res: SimulationResult, path: Path) -> None:
    payload = {
        "J_T": res.J_T,
        "T": res.T,
        "seed": res.seed,
        "controller": res.controller,
        "event_count": res.event_count,
        "wall_time": res.wall_time,
        "visits": {str(aid): [[t, tgt] for (t, tgt) in seq]
                   for aid, seq in res.visits.items()},
    }
    path.write_text(json.dumps(payload, indent=2) + "\n")


def _load(args) -> "Scenario":
    sc = parse_scenario(args.scenario)
    lam = getattr(args, "lam", None)
    return apply_overrides(
        sc, controller=getattr(args, "controller", None),
        H=getattr(args, "H", None), alpha=getattr(args, "alpha", None),
        beta=getattr(args, "beta", None), noise=getattr(args, "noise", None),
        m=getattr(args, "m", None), lam=lam,
        seed=getattr(args, "seed", None), T=getattr(args, "T", None))


def cmd_run(args) -> int:
    sc = _load(args)
    try:
        res = run(sc)
    except SimulationAbort as exc:
        print(f"simulation aborted: {exc}", file=sys.stderr)
        return EXIT_ABORT
    out = _out_dir(args.out)
    write_trace(res, out / "trace.csv", sc.graph.ids)
    write_result(res, out / "result.json")
    print(f"J_T = {res.J_T:.6f}  events = {res.event_count}  "
          f"controller = {res.controller}  seed = {res.seed}")
    print(f"wrote {out / 'trace.csv'} and {out / 'result.json'}")
    return EXIT_OK


def _parse_grid(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ScenarioError(f"bad grid value: {exc}") from exc


def _parse_seeds(text: str) -> list[int]:
    toks = [tok for tok in text.split(",") if tok.strip() != ""]
    try:
        if len(toks) == 1 and "," not in text.strip().rstrip(","):
            n = int(toks[0])
            if n <= 0:
                raise ScenarioError("seed count must be positive")
            return list(range(n))
        return [int(tok) for tok in toks]
    except ValueError as exc:
        raise ScenarioError(f"bad seed list: {exc}") from exc


def cmd_sweep(args) -> int:
    sc = _load(args)
    grid = _parse_grid(args.grid)
    seeds = _parse_seeds(args.seeds)
    try:
        report = run_sweep(sc, args.axis, grid, seeds,
                           parallel=args.parallel)
    except SimulationAbort as exc:
        print(f"simulation aborted: {exc}", file=sys.stderr)
        return EXIT_ABORT
    out = _out_dir(args.out)
    path = out / f"sweep_{args.axis.replace('-', '_')}.json"
    path.write_text(json.dumps(report, indent=2) + "\n")
    print(f"axis = {args.axis}  points = {len(report['points'])}  "
          f"seeds = {len(seeds)}")
    print(f"argmin: {args.axis} = {report['argmin']['value']} "
          f"(mean J_T = {report['argmin']['mean']:.6f})")
    if "ratio_default_to_best" in report:
        print(f"J_T(H=T/2) / best = {report['ratio_default_to_best']:.4f}")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_generate(args) -> int:
    sc = generate_scenario(args.topology, args.M, args.N, seed=args.seed,
                           T=args.T)
    out = Path(args.out) if args.out else (_out_dir(None)
                                           / "scenario.json")
    write_scenario(sc, out)
    print(f"wrote {out} ({args.topology}, M={args.M}, N={args.N})")
    return EXIT_OK


def cmd_validate(args) -> int:
    sc = parse_scenario(args.scenario)
    print(f"ok: {len(sc.graph.targets)} targets, {len(sc.edges)} edges, "
          f"{len(sc.agents)} agents, T={sc.T}, controller="
          f"{sc.controller.type}")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    """Usage mistakes are validation errors (exit 1); exit 2 stays
    reserved for simulation aborts."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_INVALID)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(
        prog="pmnet",
        description="Event-driven receding-horizon patrol simulator")
    sub = ap.add_subparsers(dest="command", required=True,
                            parser_class=_Parser)

    def add_common(p):
        p.add_argument("--scenario", required=True, help="scenario JSON file")
        p.add_argument("--controller", choices=CONTROLLER_TYPES)
        p.add_argument("--H", type=float, help="planning horizon bound")
        p.add_argument("--alpha", type=float)
        p.add_argument("--beta", type=float)
        p.add_argument("--noise", choices=NOISE_MODELS + ("none",))
        p.add_argument("--m", type=float, help="noise magnitude")
        p.add_argument("--lambda", type=float, dest="lam",
                       help="mean gap between state shocks")
        p.add_argument("--seed", type=int)
        p.add_argument("--T", type=float, help="mission length override")
        p.add_argument("--out", help="output directory")

    p_run = sub.add_parser("run", help="run one simulation")
    add_common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="sweep a parameter over seeds")
    add_common(p_sweep)
    p_sweep.add_argument("--axis", required=True, choices=AXES)
    p_sweep.add_argument("--grid", required=True,
                         help="comma-separated grid values")
    p_sweep.add_argument("--seeds", default="1",
                         help="seed count or comma-separated seed list")
    p_sweep.add_argument("--parallel", type=int, default=None,
                         help="worker processes (default: all cores)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_gen = sub.add_parser("generate", help="generate a scenario file")
    p_gen.add_argument("--topology", required=True,
                       choices=("line", "star", "grid", "random-geometric"))
    p_gen.add_argument("--M", type=int, required=True, help="target count")
    p_gen.add_argument("--N", type=int, default=1, help="agent count")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--T", type=float, default=500.0)
    p_gen.add_argument("--out", help="output file path")
    p_gen.set_defaults(func=cmd_generate)

    p_val = sub.add_parser("validate", help="validate a scenario file")
    p_val.add_argument("--scenario", required=True)
    p_val.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
