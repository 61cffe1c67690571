"""A reduced switching-rate sweep showing where messengers help most.

Sweeps a small (p_e, p_m) grid with seed-paired baselines and prints the
median normalized final dispersion per cell: 1.0 means no effect, below 1
means messengers improved consensus, above 1 means they hurt. Even on a
coarse grid the published structure shows up: corners with effectively no
messengers sit at 1.0, cells that keep a few long-lived messengers do
best, and saturating the population with messengers backfires.

Usage: python3 demos/mini_sweep.py [--ticks N] [--replicates K]
Writes sweep_aggregate.csv-compatible rows to stdout only; use the
`opinionscape sweep` command for file output.
"""

from __future__ import annotations

import argparse
import math

from opinionscape import (ModelParams, SimConfig, SweepSpec, log_grid,
                          run_sweep)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--ticks", type=int, default=5_000)
    parser.add_argument("--replicates", type=int, default=2)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    values = [float(v) for v in log_grid(math.exp(-16.0), math.exp(-2.0), 4)]
    spec = SweepSpec(grid=[(pe, pm) for pe in values for pm in values],
                     replicates=args.replicates)
    cfg = SimConfig(model=ModelParams(t_final=args.ticks),
                    master_seed=args.seed, metrics_stride=args.ticks,
                    snapshot_ticks=())
    outcome = run_sweep(spec, cfg)

    print(f"baseline median e_p_o: {outcome.baseline.median_e_p_o:.6f}\n")
    print(f"{'p_e':>12} {'p_m':>12} {'normalized e_p_o':>17}")
    best = min(outcome.cells, key=lambda c: c.median_normalized_e_p_o)
    for cell in outcome.cells:
        mark = "  <- best" if cell is best else ""
        print(f"{cell.p_e:>12.3e} {cell.p_m:>12.3e} "
              f"{cell.median_normalized_e_p_o:>17.3f}{mark}")


if __name__ == "__main__":
    main()
