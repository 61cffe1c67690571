"""Readers for the simulator's CSV and resolved-config files.

Each reader validates the columns it consumes and converts them to
typed rows. Validation errors always name the offending file and the
offending column or key.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import yaml

from scapeplot.landscape import KNOWN_KINDS, REQUIRED_PARAMS


class ReaderError(ValueError):
    """An input file is missing, empty, or schema-mismatched."""


@dataclass(frozen=True)
class AggregateCell:
    p_e: float
    p_m: float
    is_baseline: bool
    value: float


@dataclass(frozen=True)
class ConnectivityPoint:
    r_comm: float
    replicates: int
    median_initial_n_clusters: float
    mean_initial_n_clusters: float
    median_final_n_clusters: float
    mean_final_n_clusters: float
    median_initial_e_p_o: float
    median_final_e_p_o: float
    mean_final_e_p_o: float


@dataclass(frozen=True)
class SnapshotPoint:
    run_id: int
    t: int
    agent_id: int
    x: float
    y: float
    opinion: float
    state: str


@dataclass(frozen=True)
class MetricsPoint:
    run_id: int
    t: int
    e_p_o: float
    e_p_s: float
    n_clusters: float
    messenger_ratio: float


@dataclass(frozen=True)
class LandscapeInfo:
    """Landscape block of a resolved config, params split out by name."""

    kind: str
    width: float
    height: float
    ground_truth: float
    params: Mapping[str, float]


_SNAPSHOT_STATES = frozenset({"exploiter", "messenger"})


def _read_rows(path: Path, required: tuple[str, ...]) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        for col in required:
            if col not in fields:
                raise ReaderError(f"{path}: missing column '{col}'")
        rows = list(reader)
    if not rows:
        raise ReaderError(f"{path}: no data rows")
    return rows


def _number(path: Path, row: Mapping[str, str], col: str) -> float:
    try:
        return float(row[col])
    except ValueError:
        raise ReaderError(f"{path}: could not parse column '{col}' value {row[col]!r}") from None


def _integer(path: Path, row: Mapping[str, str], col: str) -> int:
    value = _number(path, row, col)
    if value != int(value):
        raise ReaderError(f"{path}: column '{col}' value {row[col]!r} is not an integer")
    return int(value)


def read_aggregate(path: Path, value_column: str) -> list[AggregateCell]:
    """Read one sweep-aggregate cell per row, taking `value_column` as the metric."""
    rows = _read_rows(path, ("p_e", "p_m", "is_baseline", value_column))
    return [AggregateCell(p_e=_number(path, r, "p_e"),
                          p_m=_number(path, r, "p_m"),
                          is_baseline=_integer(path, r, "is_baseline") != 0,
                          value=_number(path, r, value_column))
            for r in rows]


def read_connectivity(path: Path) -> list[ConnectivityPoint]:
    cols = ("r_comm", "replicates", "median_initial_n_clusters", "mean_initial_n_clusters",
            "median_final_n_clusters", "mean_final_n_clusters", "median_initial_e_p_o",
            "median_final_e_p_o", "mean_final_e_p_o")
    rows = _read_rows(path, cols)
    return [ConnectivityPoint(
        r_comm=_number(path, r, "r_comm"),
        replicates=_integer(path, r, "replicates"),
        median_initial_n_clusters=_number(path, r, "median_initial_n_clusters"),
        mean_initial_n_clusters=_number(path, r, "mean_initial_n_clusters"),
        median_final_n_clusters=_number(path, r, "median_final_n_clusters"),
        mean_final_n_clusters=_number(path, r, "mean_final_n_clusters"),
        median_initial_e_p_o=_number(path, r, "median_initial_e_p_o"),
        median_final_e_p_o=_number(path, r, "median_final_e_p_o"),
        mean_final_e_p_o=_number(path, r, "mean_final_e_p_o"),
    ) for r in rows]


def read_snapshot(path: Path) -> list[SnapshotPoint]:
    rows = _read_rows(path, ("run_id", "t", "agent_id", "x", "y", "opinion", "state"))
    out = []
    for r in rows:
        state = r["state"]
        if state not in _SNAPSHOT_STATES:
            raise ReaderError(f"{path}: column 'state' has unknown value {state!r}")
        out.append(SnapshotPoint(run_id=_integer(path, r, "run_id"),
                                 t=_integer(path, r, "t"),
                                 agent_id=_integer(path, r, "agent_id"),
                                 x=_number(path, r, "x"),
                                 y=_number(path, r, "y"),
                                 opinion=_number(path, r, "opinion"),
                                 state=state))
    return out


def read_metrics(path: Path) -> list[MetricsPoint]:
    rows = _read_rows(path, ("run_id", "t", "e_p_o", "e_p_s", "n_clusters", "messenger_ratio"))
    return [MetricsPoint(run_id=_integer(path, r, "run_id"),
                         t=_integer(path, r, "t"),
                         e_p_o=_number(path, r, "e_p_o"),
                         e_p_s=_number(path, r, "e_p_s"),
                         n_clusters=_number(path, r, "n_clusters"),
                         messenger_ratio=_number(path, r, "messenger_ratio"))
            for r in rows]


def read_config(path: Path) -> LandscapeInfo:
    """Read the landscape block of a resolved config file.

    The resolved config flattens landscape parameters beside the kind,
    arena extents, and stored ground-truth value; whatever numeric keys
    remain after those are the kind's parameters.
    """
    try:
        doc = yaml.safe_load(Path(path).read_text())
    except yaml.YAMLError as exc:
        raise ReaderError(f"{path}: invalid YAML: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("landscape"), dict):
        raise ReaderError(f"{path}: missing mapping key 'landscape'")
    block = dict(doc["landscape"])
    for key in ("kind", "width", "height", "ground_truth"):
        if key not in block:
            raise ReaderError(f"{path}: missing landscape key '{key}'")
    kind = str(block.pop("kind"))
    if kind not in KNOWN_KINDS:
        raise ReaderError(f"{path}: unknown landscape kind '{kind}'")

    def number(key: str, value) -> float:
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ReaderError(
                f"{path}: landscape key '{key}' is not a number: {value!r}") from None

    width = number("width", block.pop("width"))
    height = number("height", block.pop("height"))
    ground_truth = number("ground_truth", block.pop("ground_truth"))
    params = {k: number(k, v) for k, v in block.items()}
    for name in REQUIRED_PARAMS[kind]:
        if name not in params:
            raise ReaderError(f"{path}: landscape '{kind}' is missing parameter '{name}'")
    return LandscapeInfo(kind=kind, width=width, height=height,
                         ground_truth=ground_truth, params=params)
