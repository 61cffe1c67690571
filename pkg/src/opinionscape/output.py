"""Tabular on-disk formats: delimiter-separated text with lossless numbers.

All files carry a header row, '.' decimal points, line-feed endings, and
floats serialized in their shortest round-trippable form, so re-parsing
recovers the exact binary values.
"""

from __future__ import annotations

import csv
from dataclasses import fields

from .metrics import TickMetrics
from .model import AgentState

METRICS_COLUMNS = ("run_id", "t", "e_p_o", "e_p_s", "n_clusters",
                   "messenger_ratio", "z_col", "s_col")
SNAPSHOT_COLUMNS = ("run_id", "t", "agent_id", "x", "y", "opinion", "state")
FAILURE_COLUMNS = ("p_e", "p_m", "run_index", "error")

_INT_COLUMNS = {"run_id", "t", "agent_id", "n_clusters", "run_index",
                "replicates", "failed", "is_baseline", "best_e_p_o",
                "best_e_p_s"}
_STR_COLUMNS = {"state", "error"}


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse(column: str, text: str):
    if column in _STR_COLUMNS:
        return text
    if column in _INT_COLUMNS:
        return int(text)
    return float(text)


def _write_rows(path, columns, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def read_table(path) -> list[dict]:
    """Read any of this package's tables back into typed row dicts."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ValueError(f"{path}: empty table")
        return [{k: _parse(k, v) for k, v in row.items()} for row in reader]


def write_metrics_csv(path, runs) -> None:
    """Write metric series; `runs` is an iterable of (run_id, series).

    Rows are grouped by run_id with strictly increasing t within each run.
    """
    def rows():
        for run_id, series in runs:
            last_t = -1
            for m in series:
                if m.t <= last_t:
                    raise ValueError(
                        f"metric rows must increase in t, got {m.t} after {last_t}")
                last_t = m.t
                yield (run_id, m.t, m.e_p_o, m.e_p_s, m.n_clusters,
                       m.messenger_ratio, m.z_col, m.s_col)
    _write_rows(path, METRICS_COLUMNS, rows())


def read_metrics_csv(path) -> list[dict]:
    return read_table(path)


def metrics_from_rows(rows) -> list[TickMetrics]:
    """Rebuild TickMetrics records from parsed metric-file rows."""
    return [TickMetrics(t=r["t"], e_p_o=r["e_p_o"], e_p_s=r["e_p_s"],
                        n_clusters=r["n_clusters"],
                        messenger_ratio=r["messenger_ratio"],
                        z_col=r["z_col"], s_col=r["s_col"]) for r in rows]


def write_snapshot_csv(path, entries) -> None:
    """Write agent snapshots; `entries` is an iterable of (run_id, t, agents)."""
    def rows():
        for run_id, t, agents in entries:
            for a in agents:
                state = ("messenger" if a.state is AgentState.MESSENGER
                         else "exploiter")
                yield (run_id, t, a.id, a.pos.x, a.pos.y, a.opinion, state)
    _write_rows(path, SNAPSHOT_COLUMNS, rows())


def read_snapshot_csv(path) -> list[dict]:
    return read_table(path)


def _dataclass_table(path, records) -> None:
    records = list(records)
    if not records:
        raise ValueError("no records to write")
    columns = [f.name for f in fields(records[0])]
    _write_rows(path, columns,
                ([getattr(r, c) for c in columns] for r in records))


def write_connectivity_csv(path, rows) -> None:
    _dataclass_table(path, rows)


def write_aggregate_csv(path, baseline, cells) -> None:
    """Baseline row first, then grid cells in grid order."""
    _dataclass_table(path, [baseline] + list(cells))


def write_failures_csv(path, failures) -> None:
    _write_rows(path, FAILURE_COLUMNS,
                ((f.p_e, f.p_m, f.run_index, f.error) for f in failures))


SWEEP_RUN_MAP_COLUMNS = ("run_id", "p_e", "p_m", "run_index", "is_baseline")
CONNECTIVITY_RUN_MAP_COLUMNS = ("run_id", "r_comm", "run_index")


def write_sweep_run_map_csv(path, rows) -> None:
    """Map per-run series ids back to their grid cell; rows of
    (run_id, p_e, p_m, run_index, is_baseline)."""
    _write_rows(path, SWEEP_RUN_MAP_COLUMNS, rows)


def write_connectivity_run_map_csv(path, rows) -> None:
    _write_rows(path, CONNECTIVITY_RUN_MAP_COLUMNS, rows)


def write_analysis_csv(path, annotations) -> None:
    _dataclass_table(path, annotations)
