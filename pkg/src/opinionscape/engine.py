"""Deterministic tick scheduler: full simulation runs over agent arrays.

Executes the same per-tick semantics as the scalar operations in `model`,
vectorized over agents. Tick pipeline: (1) state switching plus transition
side effects, (2) adjacency from current positions, (3) dynamics computed
from the post-transition snapshot and applied atomically, (4) metric rows on
the recording stride. All randomness flows through the per-agent streams of
`streams`, consumed in a fixed documented order (exploiters draw one walk
pair per tick; a messenger draws one on the first move of each stint), so
results are reproducible bit-for-bit for a given (config, master_seed,
run_index). No BLAS-backed reduction is used anywhere in the tick path.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field

import numpy as np

from .dmp import DmpParams, InitialStatePolicy, InitPolicyKind, initial_state
from .landscape import Landscape, make_radial_cone
from .metrics import (TickMetrics, adjacency_from_positions, count_clusters,
                      population_variance)
from .model import GRAD_GUARD, Agent, AgentState, ModelParams, Vec2
from .streams import (PURPOSE_INIT, PURPOSE_NOISE, PURPOSE_STATE, PURPOSE_WALK,
                      StreamBank, derive_generator)

DEFAULT_SNAPSHOT_TICKS = (1000, 2000, 4000, 10000, 40000)

_MAX_SEED = 2 ** 64


@dataclass
class SimConfig:
    """Everything one run needs: parameters, landscape, seeding, recording."""

    model: ModelParams = field(default_factory=ModelParams)
    dmp: DmpParams = field(default_factory=DmpParams)
    init_policy: InitialStatePolicy = field(default_factory=InitialStatePolicy)
    landscape: Landscape = field(default_factory=make_radial_cone)
    master_seed: int = 0
    metrics_stride: int = 1000
    snapshot_ticks: tuple = DEFAULT_SNAPSHOT_TICKS

    def validate(self) -> None:
        for section in ("model", "dmp"):
            try:
                getattr(self, section).validate()
            except ValueError as e:
                raise ValueError(f"{section}.{e}") from None
        try:
            self.init_policy.validate()
        except ValueError as e:
            raise ValueError(f"init.{e}") from None
        if (self.init_policy.kind is InitPolicyKind.FIXED_COUNT
                and self.init_policy.count > self.model.n_agents):
            raise ValueError(
                f"init.count must be <= n_agents, got {self.init_policy.count}")
        if not isinstance(self.landscape, Landscape):
            raise ValueError("landscape must be a Landscape instance")
        if not isinstance(self.master_seed, int) or not 0 <= self.master_seed < _MAX_SEED:
            raise ValueError(
                f"seed must be an integer in [0, 2^64), got {self.master_seed}")
        if not isinstance(self.metrics_stride, int) or self.metrics_stride < 1:
            raise ValueError(
                f"output.metrics_stride must be an integer >= 1, "
                f"got {self.metrics_stride}")
        for t in self.snapshot_ticks:
            if not isinstance(t, int) or t < 0:
                raise ValueError(
                    f"output.snapshot_ticks must be integers >= 0, got {t}")


@dataclass
class RunResult:
    """One run's outputs plus identity hashes.

    config_digest identifies the resolved configuration (seed and run index
    included); output_digest covers the metric series and the final snapshot
    only, so two runs that produce identical trajectories compare equal even
    when their configurations differ.
    """

    config_digest: str
    output_digest: str
    series: list[TickMetrics]
    final_snapshot: list[Agent]
    snapshots: dict[int, list[Agent]]
    wall_time: float
    master_seed: int
    run_index: int


def config_fingerprint(config: SimConfig, run_index: int) -> str:
    m, d, ip, ls = config.model, config.dmp, config.init_policy, config.landscape
    parts = [
        "opinionscape-config-1",
        repr(int(config.master_seed)), repr(int(run_index)),
        repr(m.n_agents), repr(m.r_comm), repr(m.alpha), repr(m.beta),
        repr(m.r_lambda), repr(m.step_size), repr(m.sigma), repr(m.t_final),
        repr(d.p_e), repr(d.p_m),
        ip.kind.value, repr(ip.count),
        ls.kind.value, repr(ls.arena.width), repr(ls.arena.height),
        repr(sorted(ls.params.items())), repr(ls.ground_truth),
        repr(int(config.metrics_stride)),
        repr(sorted(int(t) for t in config.snapshot_ticks)),
    ]
    return hashlib.sha256("|".join(parts).encode()).hexdigest()


def _output_digest(series: list[TickMetrics], snapshot: list[Agent]) -> str:
    h = hashlib.sha256()
    for row in series:
        h.update(np.array([row.t, row.n_clusters], dtype="<i8").tobytes())
        h.update(np.array([row.e_p_o, row.e_p_s, row.messenger_ratio,
                           row.z_col, row.s_col], dtype="<f8").tobytes())
    for a in snapshot:
        h.update(np.array([a.id], dtype="<i8").tobytes())
        h.update(np.array([a.pos.x, a.pos.y, a.opinion],
                          dtype="<f8").tobytes())
        h.update(b"M" if a.state is AgentState.MESSENGER else b"E")
    return h.hexdigest()


def _reflect_into(values: np.ndarray, extent: float) -> np.ndarray:
    # one mirror correction per pass, re-tested, exactly like the scalar rule
    while True:
        below = values < 0.0
        above = values > extent
        if not (below.any() or above.any()):
            return values
        values = np.where(below, -values,
                          np.where(above, 2.0 * extent - values, values))


def _reflect_fold(values: np.ndarray,
                  extent: float) -> tuple[np.ndarray, np.ndarray]:
    # mirror correction plus direction parity, like the scalar _reflect_sign
    sign = np.ones_like(values)
    while True:
        below = values < 0.0
        above = values > extent
        if not (below.any() or above.any()):
            return values, sign
        sign = np.where(below | above, -sign, sign)
        values = np.where(below, -values,
                          np.where(above, 2.0 * extent - values, values))


def _snapshot(ids, pos, prev_pos, z, is_m, grad, prev_d,
              heading, has_heading) -> list[Agent]:
    out = []
    for i in ids:
        out.append(Agent(
            id=int(i),
            pos=Vec2(float(pos[i, 0]), float(pos[i, 1])),
            prev_pos=Vec2(float(prev_pos[i, 0]), float(prev_pos[i, 1])),
            opinion=float(z[i]),
            state=AgentState.MESSENGER if is_m[i] else AgentState.EXPLOITER,
            grad_mem=Vec2(float(grad[i, 0]), float(grad[i, 1])),
            prev_dissonance=float(prev_d[i]),
            heading=(Vec2(float(heading[i, 0]), float(heading[i, 1]))
                     if is_m[i] and has_heading[i] else None),
        ))
    return out


def run_simulation(config: SimConfig, run_index: int = 0) -> RunResult:
    """Execute one full run; bit-identical for identical inputs."""
    config.validate()
    t_start = time.perf_counter()

    m = config.model
    ls = config.landscape
    arena = ls.arena
    n = m.n_agents
    p_e, p_m = config.dmp.p_e, config.dmp.p_m
    sigma, alpha, beta = m.sigma, m.alpha, m.beta
    r_lam, w = m.r_lambda, m.step_size
    seed, run_idx = config.master_seed, run_index

    # initial draws, per agent, in documented order: x, y, opinion noise
    # (only when sigma > 0), then the state-policy uniform when needed
    pos = np.empty((n, 2), dtype=np.float64)
    z = np.empty(n, dtype=np.float64)
    is_m = np.zeros(n, dtype=bool)
    for i in range(n):
        g = derive_generator(seed, run_idx, i, PURPOSE_INIT)
        pos[i, 0] = g.uniform(0.0, arena.width)
        pos[i, 1] = g.uniform(0.0, arena.height)
        z[i] = float(ls.value(pos[i, 0], pos[i, 1]))
        if sigma > 0:
            z[i] += sigma * float(g.standard_normal())
        st = initial_state(config.init_policy, config.dmp, i, g)
        is_m[i] = st is AgentState.MESSENGER

    prev_pos = pos.copy()
    grad = np.zeros((n, 2), dtype=np.float64)
    prev_d = np.zeros(n, dtype=np.float64)
    heading = np.zeros((n, 2), dtype=np.float64)
    has_heading = np.zeros(n, dtype=bool)

    noise = StreamBank(seed, run_idx, n, PURPOSE_NOISE, "standard_normal")
    walk = StreamBank(seed, run_idx, n, PURPOSE_WALK, "uniform_pm1")
    state = StreamBank(seed, run_idx, n, PURPOSE_STATE, "random")

    ids = np.arange(n)
    r2 = m.r_comm * m.r_comm
    empty = np.empty(0, dtype=np.int64)

    def record(t: int) -> TickMetrics:
        svals = np.asarray(ls.value(pos[:, 0], pos[:, 1]), dtype=np.float64)
        adj = adjacency_from_positions(pos[:, 0], pos[:, 1], m.r_comm)
        return TickMetrics(
            t=t,
            e_p_o=population_variance(z),
            e_p_s=population_variance(svals),
            n_clusters=count_clusters(adj),
            messenger_ratio=float(is_m.mean()),
            z_col=float(z.mean()),
            s_col=float(svals.mean()),
        )

    series = [record(0)]
    snap_ticks = {int(t) for t in config.snapshot_ticks if 0 <= t <= m.t_final}
    snapshots: dict[int, list[Agent]] = {}
    if 0 in snap_ticks:
        snapshots[0] = _snapshot(ids, pos, prev_pos, z, is_m, grad, prev_d,
                                 heading, has_heading)

    for t in range(1, m.t_final + 1):
        # -- state switching (skip draws entirely when a probability is zero)
        if p_m > 0:
            idx_e = np.flatnonzero(~is_m)
            to_m = idx_e[state.take(idx_e) < p_m]
        else:
            to_m = empty
        if p_e > 0:
            idx_mm = np.flatnonzero(is_m)
            to_e = idx_mm[state.take(idx_mm) < p_e]
        else:
            to_e = empty
        if to_e.size:
            # returning exploiters: resample opinion, drop motion memory
            z[to_e] = ls.value(pos[to_e, 0], pos[to_e, 1])
            if sigma > 0:
                z[to_e] += sigma * noise.take(to_e)
            grad[to_e] = 0.0
            prev_pos[to_e] = pos[to_e]
            prev_d[to_e] = 0.0
        if to_m.size:
            is_m[to_m] = True
            has_heading[to_m] = False
        if to_e.size:
            is_m[to_e] = False
            has_heading[to_e] = False

        # -- adjacency over current positions
        dx = pos[:, 0][:, None] - pos[:, 0][None, :]
        dy = pos[:, 1][:, None] - pos[:, 1][None, :]
        adj = dx * dx + dy * dy <= r2
        np.fill_diagonal(adj, False)

        # -- exploiter dynamics from the post-transition snapshot
        ex = np.flatnonzero(~is_m)
        s = np.asarray(ls.value(pos[ex, 0], pos[ex, 1]), dtype=np.float64)
        if sigma > 0:
            s = s + sigma * noise.take(ex)
        adj_ex = adj[ex]
        deg_ex = adj_ex.sum(axis=1)
        nbr_sum = (adj_ex * z[None, :]).sum(axis=1)
        z_loc = np.where(deg_ex > 0, nbr_sum / np.maximum(deg_ex, 1), z[ex])
        diff = s - z_loc
        d = 0.5 * diff * diff

        delta = pos[ex] - prev_pos[ex]
        ok = np.abs(delta) >= GRAD_GUARD
        dd = d - prev_d[ex]
        samp = np.where(ok, dd[:, None] / np.where(ok, delta, 1.0), 0.0)
        g_new = beta * grad[ex] + (1.0 - beta) * samp

        # -- movement: each exploiter consumes one direction pair per tick;
        #    a messenger draws a unit heading on the first move of its stint,
        #    then travels in a straight line folded at the walls
        eta = walk.take_pair(ex)
        gn = np.hypot(g_new[:, 0], g_new[:, 1])
        has_g = gn > 0.0
        anti = np.zeros_like(g_new)
        if has_g.any():
            anti[has_g] = -g_new[has_g] / gn[has_g, None]
        lam = np.where(has_g[:, None],
                       (1.0 - r_lam) * anti + r_lam * eta,
                       r_lam * eta)
        lam = np.where((deg_ex == 0)[:, None], eta, lam)

        mi = np.flatnonzero(is_m)
        if mi.size:
            fresh = mi[~has_heading[mi]]
            if fresh.size:
                draw = walk.take_pair(fresh)
                while True:
                    zero = (draw[:, 0] == 0.0) & (draw[:, 1] == 0.0)
                    if not zero.any():
                        break
                    draw[zero] = walk.take_pair(fresh[zero])
                hn = np.hypot(draw[:, 0], draw[:, 1])
                heading[fresh] = draw / hn[:, None]
                has_heading[fresh] = True

        new_pos = pos.copy()
        lam_norm = np.hypot(lam[:, 0], lam[:, 1])
        moving = lam_norm > 0.0
        if moving.any():
            mv = ex[moving]
            new_pos[mv] += w * lam[moving] / lam_norm[moving, None]
        if mi.size:
            new_pos[mi] += w * heading[mi]
        new_pos[:, 0], fold_x = _reflect_fold(new_pos[:, 0], arena.width)
        new_pos[:, 1], fold_y = _reflect_fold(new_pos[:, 1], arena.height)
        if mi.size:
            heading[mi, 0] *= fold_x[mi]
            heading[mi, 1] *= fold_y[mi]

        z_new = alpha * z[ex] + (1.0 - alpha) / (1 + deg_ex) * (s + nbr_sum)

        # -- atomic commit
        prev_pos = pos
        pos = new_pos
        z[ex] = z_new
        grad[ex] = g_new
        prev_d[ex] = d

        if t % config.metrics_stride == 0:
            series.append(record(t))
        if t in snap_ticks:
            snapshots[t] = _snapshot(ids, pos, prev_pos, z, is_m, grad,
                                     prev_d, heading, has_heading)

    final = _snapshot(ids, pos, prev_pos, z, is_m, grad, prev_d,
                      heading, has_heading)
    return RunResult(
        config_digest=config_fingerprint(config, run_idx),
        output_digest=_output_digest(series, final),
        series=series,
        final_snapshot=final,
        snapshots=snapshots,
        wall_time=time.perf_counter() - t_start,
        master_seed=seed,
        run_index=run_idx,
    )
