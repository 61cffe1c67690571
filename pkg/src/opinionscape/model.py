"""Domain types and per-tick physics for individual agents.

Scalar reference implementations of the update rules: environment sampling,
opinion integration, dissonance, pseudo-gradient estimation, movement with
reflective walls, and the messenger random walk. The engine module executes
the same rules vectorized; these operations define the semantics and consume
random draws in the documented order (one standard normal per noisy sample,
two walk uniforms per move).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .landscape import Arena, Landscape
from .streams import AgentStreams

# displacements smaller than this are treated as zero in the gradient quotient
GRAD_GUARD = 1e-12


@dataclass(frozen=True)
class Vec2:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"vector components must be finite, got {self}")

    @property
    def norm(self) -> float:
        return math.hypot(self.x, self.y)


class AgentState(Enum):
    EXPLOITER = "exploiter"
    MESSENGER = "messenger"


@dataclass
class ModelParams:
    """Population and dynamics parameters with their standard defaults."""

    n_agents: int = 100
    r_comm: float = 0.15
    alpha: float = 0.99
    beta: float = 0.5
    r_lambda: float = 0.001
    step_size: float = 0.002
    sigma: float = 0.001
    t_final: int = 50_000

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if not isinstance(self.n_agents, int) or self.n_agents < 1:
            raise ValueError(f"n_agents must be an integer >= 1, got {self.n_agents}")
        if not self.r_comm > 0:
            raise ValueError(f"r_comm must be > 0, got {self.r_comm}")
        for name in ("alpha", "beta", "r_lambda"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be within [0, 1], got {v}")
        if not self.step_size > 0:
            raise ValueError(f"step_size must be > 0, got {self.step_size}")
        if not self.sigma >= 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if not isinstance(self.t_final, int) or self.t_final < 0:
            raise ValueError(f"t_final must be an integer >= 0, got {self.t_final}")


@dataclass
class Agent:
    """One agent's full dynamic state.

    heading is the unit transport direction a messenger keeps for its whole
    stint; None for exploiters and for messengers that have not moved yet.
    """

    id: int
    pos: Vec2
    prev_pos: Vec2
    opinion: float
    state: AgentState = AgentState.EXPLOITER
    grad_mem: Vec2 = field(default_factory=lambda: Vec2(0.0, 0.0))
    prev_dissonance: float = 0.0
    heading: Vec2 | None = None
    rng_stream: AgentStreams | None = None


def sample_environment(landscape: Landscape, pos: Vec2, noise_sigma: float,
                       rng: np.random.Generator) -> float:
    """Noisy local measurement f(pos) + sigma * xi.

    Consumes one standard-normal draw when noise_sigma > 0 and none when it
    is zero, so noiseless runs leave the noise stream untouched.
    """
    if noise_sigma < 0:
        raise ValueError(f"noise_sigma must be >= 0, got {noise_sigma}")
    if not landscape.arena.contains(pos.x, pos.y):
        raise ValueError(f"position {pos} outside arena")
    s = float(landscape.value(pos.x, pos.y))
    if noise_sigma > 0:
        s += noise_sigma * float(rng.standard_normal())
    return s


def compute_neighbors(positions: list[Vec2], r_comm: float) -> list[list[int]]:
    """Indices of all agents within r_comm (inclusive) of each agent.

    Symmetric and irreflexive. Compares squared distances so the boundary
    case is decided identically everywhere.
    """
    if not r_comm > 0:
        raise ValueError(f"r_comm must be > 0, got {r_comm}")
    n = len(positions)
    r2 = r_comm * r_comm
    out: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            dx = positions[i].x - positions[j].x
            dy = positions[i].y - positions[j].y
            if dx * dx + dy * dy <= r2:
                out[i].append(j)
                out[j].append(i)
    return out


def update_opinion(agent: Agent, env_signal: float,
                   neighbor_opinions: list[float], alpha: float) -> float:
    """Convex blend of own opinion, the sample, and neighbor opinions."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be within [0, 1], got {alpha}")
    n_i = len(neighbor_opinions)
    social = env_signal + float(np.sum(neighbor_opinions)) if n_i else env_signal
    return alpha * agent.opinion + (1.0 - alpha) / (1 + n_i) * social


def local_mean_opinion(self_opinion: float, neighbor_opinions: list[float]) -> float:
    """Mean neighbor opinion; falls back to the agent's own when solitary."""
    if not neighbor_opinions:
        return self_opinion
    return float(np.sum(neighbor_opinions)) / len(neighbor_opinions)


def dissonance(env_signal: float, local_mean: float) -> float:
    """Half squared mismatch between the sample and the local mean opinion."""
    diff = env_signal - local_mean
    return 0.5 * diff * diff


def update_gradient_estimate(agent: Agent, new_dissonance: float,
                             beta: float) -> Vec2:
    """Decaying-memory per-axis finite-difference gradient estimate.

    Each axis takes the quotient of the total dissonance change by that
    axis's displacement; displacements below GRAD_GUARD contribute zero.
    """
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must be within [0, 1], got {beta}")
    dd = new_dissonance - agent.prev_dissonance
    dx = agent.pos.x - agent.prev_pos.x
    dy = agent.pos.y - agent.prev_pos.y
    sample_x = dd / dx if abs(dx) >= GRAD_GUARD else 0.0
    sample_y = dd / dy if abs(dy) >= GRAD_GUARD else 0.0
    return Vec2(beta * agent.grad_mem.x + (1.0 - beta) * sample_x,
                beta * agent.grad_mem.y + (1.0 - beta) * sample_y)


def movement_direction(grad_mem: Vec2, r_lambda: float,
                       rng: np.random.Generator) -> Vec2:
    """Mix of the normalized anti-gradient and a uniform random direction.

    Always consumes exactly two walk-stream uniforms. A zero gradient memory
    drops the gradient term, leaving the scaled random walk.
    """
    if not 0.0 <= r_lambda <= 1.0:
        raise ValueError(f"r_lambda must be within [0, 1], got {r_lambda}")
    eta = rng.uniform(-1.0, 1.0, size=2)
    g_norm = grad_mem.norm
    if g_norm == 0.0:
        return Vec2(r_lambda * eta[0], r_lambda * eta[1])
    return Vec2((1.0 - r_lambda) * (-grad_mem.x / g_norm) + r_lambda * eta[0],
                (1.0 - r_lambda) * (-grad_mem.y / g_norm) + r_lambda * eta[1])


def _reflect(v: float, extent: float) -> float:
    while not 0.0 <= v <= extent:
        if v < 0.0:
            v = -v
        else:
            v = 2.0 * extent - v
    return v


def _reflect_sign(v: float, extent: float) -> tuple[float, float]:
    """Mirror into [0, extent]; the sign tracks direction parity across folds."""
    sign = 1.0
    while not 0.0 <= v <= extent:
        sign = -sign
        if v < 0.0:
            v = -v
        else:
            v = 2.0 * extent - v
    return v, sign


def take_step(pos: Vec2, direction: Vec2, step_size: float, arena: Arena) -> Vec2:
    """Fixed-length step along direction, mirror-reflected at the walls."""
    if not step_size > 0:
        raise ValueError(f"step_size must be > 0, got {step_size}")
    norm = direction.norm
    if norm == 0.0:
        raise ValueError("direction must be nonzero")
    x = pos.x + step_size * direction.x / norm
    y = pos.y + step_size * direction.y / norm
    return Vec2(_reflect(x, arena.width), _reflect(y, arena.height))


def messenger_step(agent: Agent, step_size: float, arena: Arena,
                   rng: np.random.Generator | None) -> Agent:
    """Straight-line transport step; the carried opinion is untouched.

    A messenger keeps one heading for its whole stint. On the first move of
    a stint the heading is drawn from rng as a pair of Uniform[-1, +1]
    components (re-drawn if both are exactly zero) and normalized; after
    that no randomness is consumed and rng may be None. Wall hits fold the
    heading like a billiard, so the path is a straight line mirrored into
    the arena.
    """
    if agent.state is not AgentState.MESSENGER:
        raise ValueError("messenger_step requires a messenger")
    h = agent.heading
    if h is None:
        eta = rng.uniform(-1.0, 1.0, size=2)
        while eta[0] == 0.0 and eta[1] == 0.0:
            eta = rng.uniform(-1.0, 1.0, size=2)
        norm = float(np.hypot(eta[0], eta[1]))
        h = Vec2(eta[0] / norm, eta[1] / norm)
    x, sx = _reflect_sign(agent.pos.x + step_size * h.x, arena.width)
    y, sy = _reflect_sign(agent.pos.y + step_size * h.y, arena.height)
    return replace(agent, pos=Vec2(x, y), prev_pos=agent.pos,
                   heading=Vec2(sx * h.x, sy * h.y))


def exploiter_tick(agent: Agent, neighbor_opinions: list[float],
                   landscape: Landscape, params: ModelParams,
                   streams: AgentStreams | None = None) -> Agent:
    """One full update for an exploiter, from the current-tick snapshot.

    Samples the environment, evaluates dissonance against the local mean
    (messenger neighbors included), refreshes the gradient memory, moves one
    step (pure random walk when solitary), and integrates the opinion.
    """
    if agent.state is not AgentState.EXPLOITER:
        raise ValueError("exploiter_tick requires an exploiter")
    streams = streams or agent.rng_stream
    if streams is None:
        raise ValueError("agent has no stream bundle")

    s = sample_environment(landscape, agent.pos, params.sigma, streams.noise)
    z_loc = local_mean_opinion(agent.opinion, neighbor_opinions)
    d = dissonance(s, z_loc)
    grad = update_gradient_estimate(agent, d, params.beta)

    if neighbor_opinions:
        direction = movement_direction(grad, params.r_lambda, streams.walk)
    else:
        # solitary rule: homophily has no target, ignore the gradient term
        eta = streams.walk.uniform(-1.0, 1.0, size=2)
        direction = Vec2(eta[0], eta[1])
    if direction.norm == 0.0:
        new_pos = agent.pos
    else:
        new_pos = take_step(agent.pos, direction, params.step_size,
                            landscape.arena)

    new_opinion = update_opinion(agent, s, neighbor_opinions, params.alpha)
    return replace(agent, pos=new_pos, prev_pos=agent.pos, opinion=new_opinion,
                   grad_mem=grad, prev_dissonance=d)
