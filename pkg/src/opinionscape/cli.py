"""Command-line front end.

Subcommands map one-to-one onto the experiment families: `run` (single
simulation), `sweep` (probability grid), `connectivity` (communication-range
scan), `analyze` (sweep post-processing). Exit codes: 0 success, 1 usage or
configuration error, 2 runtime failure. Errors print a single
machine-parsable line `error: <message>` to stderr.

Output directory precedence: --output-dir flag, then the
OPINIONSCAPE_OUTPUT_DIR environment variable, then output.dir from the
configuration file, then ./out.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .config import (ConfigError, FullConfig, OutputSettings, default_config,
                     load_config, serialize_config)
from .engine import run_simulation
from .output import (read_table, write_aggregate_csv, write_analysis_csv,
                     write_connectivity_csv, write_connectivity_run_map_csv,
                     write_failures_csv, write_metrics_csv,
                     write_snapshot_csv, write_sweep_run_map_csv)
from .sweep import CellAggregate, analyze_cells, connectivity_sweep, run_sweep

ENV_OUTPUT_DIR = "OPINIONSCAPE_OUTPUT_DIR"
DEFAULT_R_COMM_LIST = "0.1,0.15,0.2,0.3,0.4,0.6"


def _fail(message: str) -> None:
    line = " ".join(str(message).splitlines()) or "unknown error"
    print(f"error: {line}", file=sys.stderr)


def _load(args) -> FullConfig:
    if args.config is None:
        full = default_config()
    else:
        full = load_config(args.config)
    if getattr(args, "seed", None) is not None:
        full = replace(full, sim=replace(full.sim, master_seed=args.seed))
        try:
            full.sim.validate()
        except ValueError as e:
            raise ConfigError(str(e)) from None
    return full


def _resolve_output_dir(args, full: FullConfig) -> Path:
    chosen = (getattr(args, "output_dir", None)
              or os.environ.get(ENV_OUTPUT_DIR)
              or full.output.dir
              or "out")
    path = Path(chosen)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_echo(out_dir: Path, full: FullConfig) -> None:
    echoed = replace(full, output=replace(full.output, dir=str(out_dir)))
    path = out_dir / "config_resolved.yaml"
    path.write_text(serialize_config(echoed), encoding="utf-8")


def _cmd_run(args) -> int:
    full = _load(args)
    out_dir = _resolve_output_dir(args, full)
    _write_echo(out_dir, full)

    result = run_simulation(full.sim, run_index=0)

    write_metrics_csv(out_dir / "metrics.csv", [(0, result.series)])
    entries = [(0, t, result.snapshots[t]) for t in sorted(result.snapshots)]
    if full.sim.model.t_final not in result.snapshots:
        entries.append((0, full.sim.model.t_final, result.final_snapshot))
    write_snapshot_csv(out_dir / "snapshot.csv", entries)

    last = result.series[-1]
    print(f"run complete: {len(result.series)} metric rows, "
          f"final e_p_o={last.e_p_o:.6g} n_clusters={last.n_clusters} "
          f"output_digest={result.output_digest[:16]}")
    print(f"wrote {out_dir / 'metrics.csv'}, {out_dir / 'snapshot.csv'}, "
          f"{out_dir / 'config_resolved.yaml'}")
    return 0


def _cmd_sweep(args) -> int:
    full = _load(args)
    settings = full.sweep
    if args.resolution is not None:
        if args.resolution < 1:
            raise ConfigError(
                f"--resolution must be >= 1, got {args.resolution}")
        settings = replace(settings, resolution=args.resolution)
    if args.replicates is not None:
        if args.replicates < 1:
            raise ConfigError(
                f"--replicates must be >= 1, got {args.replicates}")
        settings = replace(settings, replicates=args.replicates)
    if args.unpaired_baseline:
        settings = replace(settings, paired_baseline=False)
    full = replace(full, sweep=settings)

    out_dir = _resolve_output_dir(args, full)
    _write_echo(out_dir, full)

    spec = settings.build_spec()
    outcome = run_sweep(spec, full.sim, parallelism=args.parallelism,
                        keep_results=args.per_run_series)

    write_aggregate_csv(out_dir / "sweep_aggregate.csv",
                        outcome.baseline, outcome.cells)
    write_failures_csv(out_dir / "sweep_failures.csv", outcome.failures)

    if args.per_run_series:
        reps = spec.replicates
        keys = [("baseline", k) for k in range(reps)]
        for pe, pm in spec.grid:
            keys += [(pe, pm, k) for k in range(reps)]
        runs, map_rows = [], []
        run_id = 0
        for key in keys:
            result = outcome.runs.get(key)
            if result is None:
                continue
            baseline = key[0] == "baseline"
            pe, pm = (0.0, 0.0) if baseline else (key[0], key[1])
            runs.append((run_id, result.series))
            map_rows.append((run_id, pe, pm, result.run_index, baseline))
            run_id += 1
        write_metrics_csv(out_dir / "sweep_runs_metrics.csv", runs)
        write_sweep_run_map_csv(out_dir / "sweep_runs_map.csv", map_rows)

    done = len(spec.grid) * spec.replicates - len(outcome.failures)
    print(f"sweep complete: {len(spec.grid)} cells x {spec.replicates} "
          f"replicates, {done} runs finished, {len(outcome.failures)} failed")
    print(f"wrote {out_dir / 'sweep_aggregate.csv'}, "
          f"{out_dir / 'sweep_failures.csv'}")
    if outcome.failures:
        _fail(f"{len(outcome.failures)} runs failed; see "
              f"{out_dir / 'sweep_failures.csv'}")
        return 2
    return 0


def _parse_r_list(text: str) -> list[float]:
    values = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            values.append(float(token))
        except ValueError:
            raise ConfigError(
                f"--r-comm: expected comma-separated numbers, got {token!r}"
            ) from None
    if not values:
        raise ConfigError("--r-comm: no values given")
    return values


def _cmd_connectivity(args) -> int:
    full = _load(args)
    r_values = _parse_r_list(args.r_comm)
    replicates = (args.replicates if args.replicates is not None
                  else full.sweep.replicates)
    if replicates < 1:
        raise ConfigError(f"--replicates must be >= 1, got {replicates}")

    out_dir = _resolve_output_dir(args, full)
    _write_echo(out_dir, full)

    if args.per_run_series:
        rows, results = connectivity_sweep(
            r_values, full.sim, replicates=replicates,
            parallelism=args.parallelism, keep_results=True)
        runs, map_rows = [], []
        run_id = 0
        for r in sorted(set(float(v) for v in r_values)):
            for k in range(replicates):
                result = results.get((r, k))
                if result is None:
                    continue
                runs.append((run_id, result.series))
                map_rows.append((run_id, r, k))
                run_id += 1
        write_metrics_csv(out_dir / "connectivity_runs_metrics.csv", runs)
        write_connectivity_run_map_csv(
            out_dir / "connectivity_runs_map.csv", map_rows)
    else:
        rows = connectivity_sweep(r_values, full.sim, replicates=replicates,
                                  parallelism=args.parallelism)

    write_connectivity_csv(out_dir / "connectivity.csv", rows)
    for row in rows:
        print(f"r_comm={row.r_comm:g}: median final n_clusters="
              f"{row.median_final_n_clusters:g}, median final e_p_o="
              f"{row.median_final_e_p_o:.6g}")
    print(f"wrote {out_dir / 'connectivity.csv'}")
    return 0


def _expected_grid(sweep_dir: Path):
    echo = sweep_dir / "config_resolved.yaml"
    if not echo.is_file():
        return None
    try:
        return load_config(str(echo)).sweep.build_spec().grid
    except ConfigError:
        return None


def _cmd_analyze(args) -> int:
    sweep_dir = Path(args.sweep_dir)
    aggregate_path = sweep_dir / "sweep_aggregate.csv"
    if not aggregate_path.is_file():
        _fail(f"no sweep aggregate at {aggregate_path}: 0 completed cells")
        return 2

    rows = read_table(aggregate_path)
    cells = [CellAggregate(**row) for row in rows]
    completed = {(c.p_e, c.p_m) for c in cells
                 if not c.is_baseline and c.failed < c.replicates}

    expected = _expected_grid(sweep_dir)
    if expected is not None:
        missing = [cell for cell in expected if cell not in completed]
        if missing:
            shown = ", ".join(f"({pe:.6g}, {pm:.6g})"
                              for pe, pm in missing[:20])
            suffix = ", ..." if len(missing) > 20 else ""
            _fail(f"incomplete sweep: {len(missing)} of {len(expected)} "
                  f"cells missing: {shown}{suffix}")
            return 2
    if not completed:
        _fail(f"no completed grid cells in {aggregate_path}: "
              f"0 completed cells")
        return 2

    annotations = analyze_cells(cells)
    out_dir = Path(args.output_dir) if args.output_dir else sweep_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    write_analysis_csv(out_dir / "analysis.csv", annotations)

    for field_name, label in (("best_e_p_o", "opinion precision"),
                              ("best_e_p_s", "spatial precision")):
        for a in annotations:
            if getattr(a, field_name):
                value = (a.median_normalized_e_p_o
                         if field_name == "best_e_p_o"
                         else a.median_normalized_e_p_s)
                sojourn = ("inf" if math.isnan(a.expected_sojourn_ticks)
                           else f"{a.expected_sojourn_ticks:.6g}")
                print(f"best normalized {label}: p_e={a.p_e:.6g} "
                      f"p_m={a.p_m:.6g} median={value:.6g} "
                      f"(expected messenger ratio "
                      f"{a.expected_messenger_ratio:.6g}, "
                      f"expected sojourn {sojourn} ticks)")
    print(f"wrote {out_dir / 'analysis.csv'}")
    return 0


def _add_common(sub, with_seed: bool = True) -> None:
    sub.add_argument("--config", metavar="PATH", default=None,
                     help="configuration file (defaults used when omitted)")
    if with_seed:
        sub.add_argument("--seed", type=int, default=None,
                         help="override the master seed")
    sub.add_argument("--output-dir", metavar="DIR", default=None,
                     help="output directory (overrides config and "
                          f"{ENV_OUTPUT_DIR})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opinionscape",
        description="Agent-based opinion dynamics on continuous information "
                    "landscapes: echo chambers, messengers, parameter sweeps.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p_run = subs.add_parser("run", help="execute a single simulation")
    _add_common(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = subs.add_parser(
        "sweep", help="Monte-Carlo sweep over the (p_e, p_m) grid")
    _add_common(p_sweep)
    p_sweep.add_argument("--resolution", type=int, default=None,
                         help="grid points per probability axis")
    p_sweep.add_argument("--replicates", type=int, default=None,
                         help="independent runs per grid cell")
    p_sweep.add_argument("--parallelism", type=int, default=1,
                         help="worker processes (1 = serial)")
    p_sweep.add_argument("--per-run-series", action="store_true",
                         help="also write every run's metric series")
    p_sweep.add_argument("--unpaired-baseline", action="store_true",
                         help="seed the baseline ensemble independently of "
                              "the treatment runs")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_conn = subs.add_parser(
        "connectivity", help="no-messenger baseline across r_comm values")
    _add_common(p_conn)
    p_conn.add_argument("--r-comm", metavar="LIST",
                        default=DEFAULT_R_COMM_LIST,
                        help="comma-separated communication radii "
                             f"(default {DEFAULT_R_COMM_LIST})")
    p_conn.add_argument("--replicates", type=int, default=None,
                        help="independent runs per radius")
    p_conn.add_argument("--parallelism", type=int, default=1,
                        help="worker processes (1 = serial)")
    p_conn.add_argument("--per-run-series", action="store_true",
                        help="also write every run's metric series")
    p_conn.set_defaults(func=_cmd_connectivity)

    p_an = subs.add_parser(
        "analyze", help="annotate a completed sweep and report best cells")
    p_an.add_argument("--sweep-dir", metavar="DIR", required=True,
                      help="directory holding sweep_aggregate.csv")
    p_an.add_argument("--output-dir", metavar="DIR", default=None,
                      help="where to write analysis.csv (default: sweep dir)")
    p_an.set_defaults(func=_cmd_analyze)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 0 for --help/--version, 2 for usage errors
        return 0 if e.code in (0, None) else 1
    try:
        return args.func(args)
    except ConfigError as e:
        _fail(str(e))
        return 1
    except ValueError as e:
        _fail(str(e))
        return 1
    except Exception as e:  # runtime failure
        _fail(f"{type(e).__name__}: {e}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
