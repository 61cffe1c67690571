"""Collective performance measures over the opinion and spatial domains."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .landscape import Landscape
from .model import Vec2


@dataclass(frozen=True)
class TickMetrics:
    """Per-tick record of the collective state."""

    t: int
    e_p_o: float
    e_p_s: float
    n_clusters: int
    messenger_ratio: float
    z_col: float
    s_col: float


def population_variance(values: np.ndarray) -> float:
    # exact zero on consensus: identical inputs short-circuit before any
    # rounding from the mean can manufacture a tiny spurious variance
    if values.size == 0:
        raise ValueError("variance of an empty collection")
    if np.all(values == values[0]):
        return 0.0
    mean = values.mean()
    dev = values - mean
    return float(np.mean(dev * dev))


def opinion_precision_error(opinions) -> float:
    """Population variance of opinions about the collective mean."""
    return population_variance(np.asarray(opinions, dtype=np.float64))


def _positions_to_arrays(positions) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(positions, np.ndarray):
        return positions[:, 0], positions[:, 1]
    xs = np.array([p.x for p in positions], dtype=np.float64)
    ys = np.array([p.y for p in positions], dtype=np.float64)
    return xs, ys


def spatial_precision_error(positions, landscape: Landscape) -> float:
    """Population variance of the noiseless field values at agent positions.

    Uses f itself rather than noisy samples, so agents sharing one
    iso-contour score exactly zero. Accepts Vec2 sequences or an (N, 2)
    array.
    """
    xs, ys = _positions_to_arrays(positions)
    if xs.size == 0:
        raise ValueError("spatial precision error of an empty collection")
    inside = ((xs >= 0) & (xs <= landscape.arena.width)
              & (ys >= 0) & (ys <= landscape.arena.height))
    if not bool(inside.all()):
        bad = int(np.flatnonzero(~inside)[0])
        raise ValueError(
            f"position index {bad} ({xs[bad]}, {ys[bad]}) outside arena")
    values = np.asarray(landscape.value(xs, ys), dtype=np.float64)
    return population_variance(values)


def _as_bool_matrix(adjacency) -> np.ndarray:
    if isinstance(adjacency, np.ndarray):
        return adjacency.astype(bool, copy=False)
    n = len(adjacency)
    mat = np.zeros((n, n), dtype=bool)
    for i, nbrs in enumerate(adjacency):
        for j in nbrs:
            mat[i, j] = True
    return mat


def count_clusters(adjacency) -> int:
    """Connected components of the communication graph.

    Accepts a boolean matrix or a neighbor-list structure; isolated agents
    count as their own components.
    """
    mat = _as_bool_matrix(adjacency)
    if mat.shape[0] == 0:
        raise ValueError("cluster count of an empty graph")
    n_components, _ = csgraph.connected_components(
        sparse.csr_matrix(mat), directed=False)
    return int(n_components)


def normalize_to_baseline(value: float, baseline_value: float) -> float:
    """Ratio of a metric to its no-messenger reference value."""
    if not baseline_value > 0:
        raise ValueError(
            f"degenerate baseline value {baseline_value!r}; cell is invalid")
    return value / baseline_value


def adjacency_from_positions(xs: np.ndarray, ys: np.ndarray,
                             r_comm: float) -> np.ndarray:
    """Boolean adjacency over points within r_comm (inclusive), no loops."""
    dx = xs[:, None] - xs[None, :]
    dy = ys[:, None] - ys[None, :]
    adj = dx * dx + dy * dy <= r_comm * r_comm
    np.fill_diagonal(adj, False)
    return adj


def positions_of(agents) -> list[Vec2]:
    """Convenience accessor: positions of a snapshot's agents."""
    return [a.pos for a in agents]
