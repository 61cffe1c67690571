"""Monte-Carlo replication: probability-grid sweeps and connectivity scans.

Every cell runs `replicates` independent runs (distinct run indices on one
master seed). Normalization against the no-messenger baseline is per-seed:
each treatment run is divided by the baseline run with the same run index,
then aggregated. Cells may execute in any order or in parallel; aggregates
are independent of scheduling.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .dmp import (DmpParams, InitialStatePolicy, InitPolicyKind,
                  expected_messenger_ratio, expected_sojourn_time)
from .engine import RunResult, SimConfig, run_simulation

# run indices for an unpaired baseline ensemble start here
UNPAIRED_BASELINE_OFFSET = 1_000_000

DEFAULT_P_MIN = math.exp(-20.0)
DEFAULT_P_MAX = math.exp(-2.0)
DEFAULT_RESOLUTION = 19
DEFAULT_REPLICATES = 24


def log_grid(p_min: float = DEFAULT_P_MIN, p_max: float = DEFAULT_P_MAX,
             resolution: int = DEFAULT_RESOLUTION) -> np.ndarray:
    """Log-uniformly spaced probability values, ascending."""
    if not 0 < p_min <= p_max:
        raise ValueError(f"need 0 < p_min <= p_max, got {p_min}, {p_max}")
    if resolution < 1:
        raise ValueError(f"resolution must be >= 1, got {resolution}")
    if resolution == 1 or p_min == p_max:
        return np.full(resolution, p_min, dtype=np.float64)
    return np.exp(np.linspace(math.log(p_min), math.log(p_max), resolution))


@dataclass
class SweepSpec:
    """Grid of (p_e, p_m) cells plus replication settings."""

    grid: list = field(default_factory=lambda: [
        (float(pe), float(pm)) for pe in log_grid() for pm in log_grid()])
    replicates: int = DEFAULT_REPLICATES
    paired_baseline: bool = True

    def validate(self) -> None:
        if not self.grid:
            raise ValueError("grid must be non-empty")
        if not isinstance(self.replicates, int) or self.replicates < 1:
            raise ValueError(
                f"replicates must be an integer >= 1, got {self.replicates}")
        for pe, pm in self.grid:
            if not (0 <= pe <= 1 and 0 <= pm <= 1):
                raise ValueError(f"grid cell ({pe}, {pm}) out of range")


@dataclass
class RunFinals:
    """The per-run scalars aggregation works from."""

    run_index: int
    e_p_o: float
    e_p_s: float
    n_clusters: int
    messenger_ratio: float
    time_avg_messenger_ratio: float


@dataclass
class CellAggregate:
    p_e: float
    p_m: float
    is_baseline: bool
    replicates: int
    failed: int
    mean_e_p_o: float
    median_e_p_o: float
    std_e_p_o: float
    mean_e_p_s: float
    median_e_p_s: float
    std_e_p_s: float
    mean_n_clusters: float
    median_n_clusters: float
    mean_messenger_ratio: float
    mean_time_avg_messenger_ratio: float
    median_normalized_e_p_o: float
    mean_normalized_e_p_o: float
    median_normalized_e_p_s: float
    mean_normalized_e_p_s: float
    median_normalized_n_clusters: float


@dataclass
class RunFailure:
    p_e: float
    p_m: float
    run_index: int
    error: str


@dataclass
class SweepOutcome:
    cells: list
    baseline: CellAggregate
    failures: list
    runs: dict  # (p_e, p_m, run_index) -> RunResult, only when keep_results


def baseline_config(config: SimConfig) -> SimConfig:
    """The no-messenger reference: zero switching, all exploiters."""
    return replace(config, dmp=DmpParams(p_e=0.0, p_m=0.0),
                   init_policy=InitialStatePolicy(InitPolicyKind.ALL_EXPLOITERS))


def _finals(result: RunResult) -> RunFinals:
    last = result.series[-1]
    ratios = [row.messenger_ratio for row in result.series]
    return RunFinals(
        run_index=result.run_index,
        e_p_o=last.e_p_o,
        e_p_s=last.e_p_s,
        n_clusters=last.n_clusters,
        messenger_ratio=last.messenger_ratio,
        time_avg_messenger_ratio=float(np.mean(ratios)),
    )


def _run_job(args) -> tuple:
    key, config, run_index = args
    try:
        return key, run_simulation(config, run_index=run_index), None
    except Exception as e:  # isolate per-run failures
        return key, None, repr(e)


def _execute(jobs: list, parallelism: int) -> tuple[dict, dict]:
    """Run jobs serially or in a process pool; keyed results plus errors."""
    results: dict = {}
    errors: dict = {}
    if parallelism <= 1:
        outcomes = map(_run_job, jobs)
        for key, res, err in outcomes:
            if err is None:
                results[key] = res
            else:
                errors[key] = err
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            for key, res, err in pool.map(_run_job, jobs, chunksize=1):
                if err is None:
                    results[key] = res
                else:
                    errors[key] = err
    return results, errors


def _aggregate(p_e: float, p_m: float, is_baseline: bool, replicates: int,
               finals: list, baseline_by_run: dict) -> CellAggregate:
    def stats(vals):
        arr = np.asarray(vals, dtype=np.float64)
        if arr.size == 0:
            return math.nan, math.nan, math.nan
        return (float(arr.mean()), float(np.median(arr)),
                float(arr.std(ddof=0)))

    epo = [f.e_p_o for f in finals]
    eps = [f.e_p_s for f in finals]
    ncl = [f.n_clusters for f in finals]

    norm_epo, norm_eps, norm_ncl = [], [], []
    for f in finals:
        base = baseline_by_run.get(f.run_index)
        if base is None:
            continue
        norm_epo.append(f.e_p_o / base.e_p_o if base.e_p_o > 0 else math.nan)
        norm_eps.append(f.e_p_s / base.e_p_s if base.e_p_s > 0 else math.nan)
        norm_ncl.append(f.n_clusters / base.n_clusters
                        if base.n_clusters > 0 else math.nan)

    def nan_stats(vals):
        arr = np.asarray(vals, dtype=np.float64)
        if arr.size == 0 or np.isnan(arr).all():
            return math.nan, math.nan
        return float(np.nanmedian(arr)), float(np.nanmean(arr))

    mean_epo, med_epo, std_epo = stats(epo)
    mean_eps, med_eps, std_eps = stats(eps)
    mean_ncl, med_ncl, _ = stats(ncl)
    med_n_epo, mean_n_epo = nan_stats(norm_epo)
    med_n_eps, mean_n_eps = nan_stats(norm_eps)
    med_n_ncl, _ = nan_stats(norm_ncl)

    return CellAggregate(
        p_e=p_e, p_m=p_m, is_baseline=is_baseline, replicates=replicates,
        failed=replicates - len(finals),
        mean_e_p_o=mean_epo, median_e_p_o=med_epo, std_e_p_o=std_epo,
        mean_e_p_s=mean_eps, median_e_p_s=med_eps, std_e_p_s=std_eps,
        mean_n_clusters=mean_ncl, median_n_clusters=med_ncl,
        mean_messenger_ratio=(float(np.mean([f.messenger_ratio for f in finals]))
                              if finals else math.nan),
        mean_time_avg_messenger_ratio=(
            float(np.mean([f.time_avg_messenger_ratio for f in finals]))
            if finals else math.nan),
        median_normalized_e_p_o=med_n_epo, mean_normalized_e_p_o=mean_n_epo,
        median_normalized_e_p_s=med_n_eps, mean_normalized_e_p_s=mean_n_eps,
        median_normalized_n_clusters=med_n_ncl,
    )


def run_sweep(spec: SweepSpec, base_config: SimConfig, parallelism: int = 1,
              keep_results: bool = False) -> SweepOutcome:
    """Run every grid cell plus the shared baseline ensemble.

    Per-run failures are recorded per cell without aborting the sweep. The
    returned aggregates are identical for any parallelism value.
    """
    spec.validate()
    base_config.validate()
    reps = spec.replicates
    base = baseline_config(base_config)
    base_offset = 0 if spec.paired_baseline else UNPAIRED_BASELINE_OFFSET

    jobs = [(("baseline", k), base, base_offset + k) for k in range(reps)]
    for pe, pm in spec.grid:
        cell_cfg = replace(base_config, dmp=DmpParams(p_e=pe, p_m=pm))
        jobs += [((pe, pm, k), cell_cfg, k) for k in range(reps)]

    results, errors = _execute(jobs, parallelism)

    failures: list = []
    for job in jobs:
        key = job[0]
        if key in errors:
            if key[0] == "baseline":
                failures.append(RunFailure(0.0, 0.0, job[2], errors[key]))
            else:
                failures.append(RunFailure(key[0], key[1], key[2], errors[key]))

    # keyed by the treatment run index each baseline run pairs with
    baseline_finals = {}
    for k in range(reps):
        res = results.get(("baseline", k))
        if res is not None:
            baseline_finals[k] = _finals(res)

    baseline_agg = _aggregate(
        0.0, 0.0, True, reps, list(baseline_finals.values()),
        {f.run_index: f for f in baseline_finals.values()})

    cells = []
    for pe, pm in spec.grid:
        finals = [_finals(results[(pe, pm, k)]) for k in range(reps)
                  if (pe, pm, k) in results]
        cells.append(_aggregate(pe, pm, False, reps, finals, baseline_finals))

    runs = dict(results) if keep_results else {}
    return SweepOutcome(cells=cells, baseline=baseline_agg,
                        failures=failures, runs=runs)


@dataclass
class ConnectivityRow:
    r_comm: float
    replicates: int
    median_initial_n_clusters: float
    mean_initial_n_clusters: float
    median_final_n_clusters: float
    mean_final_n_clusters: float
    median_initial_e_p_o: float
    median_final_e_p_o: float
    mean_final_e_p_o: float


def connectivity_sweep(r_values, base_config: SimConfig, replicates: int = 24,
                       parallelism: int = 1,
                       keep_results: bool = False):
    """Baseline (no-messenger) ensembles across communication ranges.

    Returns rows sorted ascending by r_comm; optionally the raw RunResults
    keyed (r_comm, run_index).
    """
    r_values = sorted(float(r) for r in r_values)
    if any(r <= 0 for r in r_values):
        raise ValueError("r_comm values must be > 0")
    base = baseline_config(base_config)

    jobs = []
    for r in r_values:
        cfg = replace(base, model=replace(base.model, r_comm=r))
        jobs += [((r, k), cfg, k) for k in range(replicates)]
    results, errors = _execute(jobs, parallelism)
    if errors:
        key, err = next(iter(sorted(errors.items())))
        raise RuntimeError(f"connectivity run {key} failed: {err}")

    rows = []
    for r in r_values:
        first = [results[(r, k)].series[0] for k in range(replicates)]
        last = [results[(r, k)].series[-1] for k in range(replicates)]
        rows.append(ConnectivityRow(
            r_comm=r,
            replicates=replicates,
            median_initial_n_clusters=float(np.median([m.n_clusters for m in first])),
            mean_initial_n_clusters=float(np.mean([m.n_clusters for m in first])),
            median_final_n_clusters=float(np.median([m.n_clusters for m in last])),
            mean_final_n_clusters=float(np.mean([m.n_clusters for m in last])),
            median_initial_e_p_o=float(np.median([m.e_p_o for m in first])),
            median_final_e_p_o=float(np.median([m.e_p_o for m in last])),
            mean_final_e_p_o=float(np.mean([m.e_p_o for m in last])),
        ))
    if keep_results:
        return rows, results
    return rows


@dataclass
class CellAnnotation:
    p_e: float
    p_m: float
    median_normalized_e_p_o: float
    median_normalized_e_p_s: float
    expected_messenger_ratio: float
    expected_sojourn_ticks: float
    best_e_p_o: bool
    best_e_p_s: bool


def analyze_cells(cells) -> list:
    """Annotate sweep cells with closed-form expectations and mark the cells
    minimizing the normalized precision errors."""
    grid = [c for c in cells if not c.is_baseline]
    if not grid:
        raise ValueError("no completed grid cells to analyze")

    def valid(vals):
        return [v for v in vals if not math.isnan(v)]

    epo_vals = valid([c.median_normalized_e_p_o for c in grid])
    eps_vals = valid([c.median_normalized_e_p_s for c in grid])
    best_epo = min(epo_vals) if epo_vals else math.nan
    best_eps = min(eps_vals) if eps_vals else math.nan

    out = []
    for c in grid:
        params = DmpParams(p_e=c.p_e, p_m=c.p_m)
        ratio = (expected_messenger_ratio(params)
                 if c.p_e + c.p_m > 0 else math.nan)
        sojourn = (expected_sojourn_time(params)
                   if c.p_e > 0 and c.p_m > 0 else math.nan)
        out.append(CellAnnotation(
            p_e=c.p_e, p_m=c.p_m,
            median_normalized_e_p_o=c.median_normalized_e_p_o,
            median_normalized_e_p_s=c.median_normalized_e_p_s,
            expected_messenger_ratio=ratio,
            expected_sojourn_ticks=sojourn,
            best_e_p_o=(not math.isnan(c.median_normalized_e_p_o)
                        and c.median_normalized_e_p_o == best_epo),
            best_e_p_s=(not math.isnan(c.median_normalized_e_p_s)
                        and c.median_normalized_e_p_s == best_eps),
        ))
    return out
