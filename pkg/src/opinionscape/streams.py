"""Reproducible per-agent random streams.

Every random draw in a run comes from a counter-based generator (Philox)
keyed on (master_seed, run_index, agent_id, purpose). Any two callers that
derive a stream from the same key see the same draws, whether they consume
them one at a time or in batches, so a vectorized engine and a scalar
reference loop stay bit-identical.

Purpose codes:
    0 init   - initial position, initial opinion noise, initial-state policy
    1 noise  - environment measurement noise (one standard normal per sample)
    2 walk   - movement direction draws (two uniforms on [-1, 1] per tick)
    3 state  - behavioral-state switching (one uniform on [0, 1) per draw)

The run-level stream uses the sentinel agent id 0xFFFFFFFF with purpose 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PURPOSE_INIT = 0
PURPOSE_NOISE = 1
PURPOSE_WALK = 2
PURPOSE_STATE = 3

RUN_STREAM_SENTINEL = 0xFFFFFFFF

_BLOCK = 4096


def derive_generator(master_seed: int, run_index: int, agent_id: int,
                     purpose: int) -> np.random.Generator:
    """Return the generator for one (run, agent, purpose) key."""
    seq = np.random.SeedSequence(master_seed,
                                 spawn_key=(run_index, agent_id, purpose))
    return np.random.Generator(np.random.Philox(seq))


@dataclass
class AgentStreams:
    """The per-agent stream bundle an Agent carries as its rng handle."""

    agent_id: int
    init: np.random.Generator
    noise: np.random.Generator
    walk: np.random.Generator
    state: np.random.Generator


@dataclass
class RunStreams:
    """All streams for one run: one bundle per agent plus a run-level stream."""

    master_seed: int
    run_index: int
    agents: list[AgentStreams]
    run: np.random.Generator


def seed_streams(master_seed: int, run_index: int, agent_count: int) -> RunStreams:
    """Derive the per-agent and run-level streams for one run.

    Streams are statistically independent across agents, purposes, and run
    indices; identical arguments always reproduce identical draws.
    """
    agents = [
        AgentStreams(
            agent_id=i,
            init=derive_generator(master_seed, run_index, i, PURPOSE_INIT),
            noise=derive_generator(master_seed, run_index, i, PURPOSE_NOISE),
            walk=derive_generator(master_seed, run_index, i, PURPOSE_WALK),
            state=derive_generator(master_seed, run_index, i, PURPOSE_STATE),
        )
        for i in range(agent_count)
    ]
    run = derive_generator(master_seed, run_index, RUN_STREAM_SENTINEL, PURPOSE_INIT)
    return RunStreams(master_seed=master_seed, run_index=run_index,
                      agents=agents, run=run)


class StreamBank:
    """Vectorized access to one purpose's per-agent streams.

    Each agent's generator pre-fills a block of draws; takes gather the next
    value per requested agent and advance that agent's cursor. Because numpy
    fills arrays with the same variate sequence as repeated scalar calls,
    values taken here equal the draws a scalar caller would get from the
    same generator.
    """

    def __init__(self, master_seed: int, run_index: int, agent_count: int,
                 purpose: int, kind: str, block: int = _BLOCK):
        if kind not in ("random", "standard_normal", "uniform_pm1"):
            raise ValueError(f"unknown draw kind: {kind}")
        self._gens = [derive_generator(master_seed, run_index, i, purpose)
                      for i in range(agent_count)]
        self._kind = kind
        self._block = block
        self._buf = np.empty((agent_count, block), dtype=np.float64)
        self._cursor = np.full(agent_count, block, dtype=np.int64)
        self._n = agent_count

    def _refill(self, i: int) -> None:
        # carry unconsumed draws to the front so no variate is ever skipped
        keep = self._block - self._cursor[i]
        if keep:
            self._buf[i, :keep] = self._buf[i, self._cursor[i]:].copy()
        g = self._gens[i]
        fresh = self._block - keep
        if self._kind == "random":
            self._buf[i, keep:] = g.random(fresh)
        elif self._kind == "standard_normal":
            self._buf[i, keep:] = g.standard_normal(fresh)
        else:
            self._buf[i, keep:] = g.uniform(-1.0, 1.0, fresh)
        self._cursor[i] = 0

    def _ensure(self, idx: np.ndarray, count: int) -> None:
        exhausted = idx[self._cursor[idx] + count > self._block]
        for i in exhausted:
            self._refill(int(i))

    def take(self, idx: np.ndarray) -> np.ndarray:
        """Next draw for each agent index in idx (shape (len(idx),)).

        Indices must be distinct within one call.
        """
        if idx.size == 0:
            return np.empty(0, dtype=np.float64)
        self._ensure(idx, 1)
        out = self._buf[idx, self._cursor[idx]]
        self._cursor[idx] += 1
        return out

    def take_pair(self, idx: np.ndarray) -> np.ndarray:
        """Next two draws for each agent index in idx (shape (len(idx), 2)).

        Indices must be distinct within one call.
        """
        if idx.size == 0:
            return np.empty((0, 2), dtype=np.float64)
        self._ensure(idx, 2)
        c = self._cursor[idx]
        out = np.stack([self._buf[idx, c], self._buf[idx, c + 1]], axis=1)
        self._cursor[idx] += 2
        return out
