"""Command-line front end: ``simulate``, ``scan``, ``compare`` and ``bench``.

Exit codes: 0 success, 1 usage/config/solver error, 2 the simulated robot fell.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

from .config import ConfigError, RunConfig, load_config
from .lip import ComState
from .optimizers import OptimizationOutcome, WalkingParams
from .scanner import (
    APPROACH_CHOICES,
    DEFAULT_JUMPS,
    ScanCell,
    benchmark,
    compare_costs,
    detect_critical,
    scan_grid,
)
from .simulator import SimulationError, run_simulation, settling_time

EXIT_OK, EXIT_ERROR, EXIT_FELL = 0, 1, 2

TRAJECTORY_COLUMNS = ["t", "x_world", "xd", "foot_world", "T_s0", "T_s1", "p", "cost", "solve_time_s"]
STEP_COLUMNS = ["t", "foot_world", "p"]
SCAN_COLUMNS = ["x", "xd", "T_s0_h", "T_s1_h", "p_h", "cost_h", "T_s0_s", "T_s1_s", "p_s", "cost_s"]
DIFF_COLUMNS = ["x", "xd", "cost_h", "cost_s", "diff"]
RIDGE_COLUMNS = ["row", "col", "x", "xd", "critical_offset", "kind"]


def fmt(v) -> str:
    """Shortest exact float text (round-trips bit-for-bit); None/NaN become empty fields."""
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    if isinstance(v, (int, str)):
        return str(v)
    return repr(float(v))


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) for v in r])


def _sibling(path: Path, suffix: str) -> Path:
    return path.with_name(f"{path.stem}_{suffix}")


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    sc = cfg.scenario
    traj = run_simulation(sc)
    out = Path(args.out)
    _write_csv(out, TRAJECTORY_COLUMNS,
               ((s.t, s.x_world, s.xd, s.foot_world, *s.cmd, s.cost, s.solve_time) for s in traj.samples))
    _write_csv(_sibling(out, "steps.csv"), STEP_COLUMNS, traj.step_events)

    t_settle = settling_time(traj, sc)
    last_push = max((e.t_stop for e in sc.pushes), default=None)
    summary = {
        "approach": sc.approach.value,
        "fell": traj.fell,
        "fall_time": traj.fall_time,
        "step_count": len(traj.step_events),
        "step_durations": _durations(traj.step_events),
        "min_step_p": min((e.p for e in traj.step_events), default=None),
        "settling_time": t_settle,
        "settling_after_push": (t_settle - last_push) if (t_settle is not None and last_push is not None) else None,
        "mean_solve_time_s": (sum(s.solve_time for s in traj.samples) / len(traj.samples)) if traj.samples else None,
    }
    _sibling(out, "summary.json").write_text(json.dumps(summary, indent=2))
    print(json.dumps({k: summary[k] for k in ("fell", "step_count", "settling_time")}))
    return EXIT_FELL if traj.fell else EXIT_OK


def _durations(events):
    times = [0.0] + [e.t for e in events]
    return [b - a for a, b in zip(times, times[1:])]


def _params(o: OptimizationOutcome):
    if o is None:
        return (None, None, None, None)
    return (*o.params, o.cost)


def cmd_scan(args) -> int:
    cfg = load_config(args.config)
    cells = scan_grid(cfg.grid, cfg.problem, args.approach, args.jobs)
    _write_csv(args.out, SCAN_COLUMNS,
               ((c.state.x, c.state.xd, *_params(c.outcome_h), *_params(c.outcome_s)) for c in cells))
    errors = [c for c in cells if c.error]
    for c in errors:
        print(f"cell ({c.state.x}, {c.state.xd}) failed: {c.error}", file=sys.stderr)
    print(json.dumps({"cells": len(cells), "failed": len(errors), "shape": list(cfg.grid.shape)}))
    return EXIT_OK


def _outcome_from(row, suffix):
    vals = [row[f"{k}_{suffix}"] for k in ("T_s0", "T_s1", "p", "cost")]
    if any(v == "" for v in vals):
        return None
    T0, T1, pp, cost = (float(v) for v in vals)
    return OptimizationOutcome(WalkingParams(T0, T1, pp), cost, None, None)


def read_scan_csv(path):
    """Rebuild scan cells and the grid shape ``(rows, cols)`` from a scan CSV."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(SCAN_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise ConfigError(f"scan CSV lacks columns: {', '.join(sorted(missing))}")
        cells = []
        for row in reader:
            cells.append(ScanCell(ComState(float(row["x"]), float(row["xd"])),
                                  _outcome_from(row, "h"), _outcome_from(row, "s")))
    if not cells:
        raise ConfigError("scan CSV has no rows")
    n_cols = len({c.state.x for c in cells})
    return cells, (len(cells) // n_cols, n_cols)


def cmd_compare(args) -> int:
    cells, shape = read_scan_csv(args.scan)
    cfg = load_config(args.config) if args.config else RunConfig()
    cmp = compare_costs(cells, threshold=args.threshold)
    out = Path(args.out)
    _write_csv(out, DIFF_COLUMNS,
               ((c.state.x, c.state.xd, _params(c.outcome_h)[3], _params(c.outcome_s)[3], d)
                for c, d in zip(cells, cmp.diffs)))
    stats = {
        "cells": len(cells),
        "threshold": cmp.threshold,
        "n_above": cmp.n_above,
        "fraction_above": cmp.fraction_above,
        "min_diff": cmp.min_diff,
        "max_diff": cmp.max_diff,
        "worst": [list(w) for w in cmp.worst],
    }
    if shape[0] >= 2 and shape[1] >= 2:
        ridge = detect_critical(cells, shape, cfg.problem.lip, cfg.problem.bounds.L_max, DEFAULT_JUMPS)
        _write_csv(_sibling(out, "ridge.csv"), RIDGE_COLUMNS,
                   ((i, j, s.x, s.xd, e, k) for (i, j), s, e, k in
                    zip(ridge.cells, ridge.states, ridge.analytic_offsets, ridge.kinds)))
        stats["ridge_cells"] = len(ridge.cells)
        stats["ridge_energy"] = ridge.kinds.count("energy")
        stats["ridge_bound"] = ridge.kinds.count("bound")
    print(json.dumps(stats, indent=2))
    return EXIT_OK


def read_states(path):
    """States file: CSV with ``x,xd`` columns and optionally ``T_elap``."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if not {"x", "xd"} <= set(reader.fieldnames or ()):
            raise ConfigError("states file needs x and xd columns")
        rows = list(reader)
    states = [ComState(float(r["x"]), float(r["xd"])) for r in rows]
    elaps = [float(r["T_elap"]) for r in rows] if rows and "T_elap" in rows[0] else None
    return states, elaps


def cmd_bench(args) -> int:
    cfg = load_config(args.config)
    if args.states:
        states, elaps = read_states(args.states)
    else:
        # the solver inputs seen along the configured simulation
        traj = run_simulation(cfg.scenario)
        states = [ComState(s.x_world - s.foot_world, s.xd) for s in traj.samples]
        elaps = [s.t_elap for s in traj.samples]
    res = benchmark(states, cfg.problem, args.reps, elaps)
    doc = {k: (vars(v) if k != "ratio" else v) for k, v in res.items()}
    text = json.dumps(doc, indent=2)
    if args.out:
        Path(args.out).write_text(text)
    print(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lipstep", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="closed-loop push-recovery simulation")
    p.add_argument("--config", required=True, help="config file or bundled scenario name")
    p.add_argument("--out", required=True, help="trajectory CSV; *_steps.csv and *_summary.json go next to it")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("scan", help="solve both optimizers over a CoM state grid")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--approach", choices=APPROACH_CHOICES, default="both")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("compare", help="cost differences and critical states from a scan CSV")
    p.add_argument("--scan", required=True, help="CSV written by the scan command")
    p.add_argument("--out", required=True, help="diff CSV; the ridge CSV goes next to it")
    p.add_argument("--config", help="config used for the scan (for T_c and L_max)")
    p.add_argument("--threshold", type=float, default=1e-6)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("bench", help="solve-time comparison of the two approaches")
    p.add_argument("--config", required=True)
    p.add_argument("--states", help="CSV of x,xd[,T_elap]; default: states along the simulated scenario")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--out", help="also write the JSON here")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return args.func(args)
    except (ConfigError, SimulationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
