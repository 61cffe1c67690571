"""Two-state dichotomous Markov switching between exploiter and messenger.

Per-tick Bernoulli transitions, the side effects applied when a transition
fires, closed-form expectations used for validation, and a states-only
ensemble helper for switching statistics at scale.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .landscape import Landscape
from .model import Agent, AgentState, Vec2, sample_environment
from .streams import PURPOSE_STATE, StreamBank, derive_generator


@dataclass
class DmpParams:
    p_e: float = 0.0
    p_m: float = 0.0

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        for name in ("p_e", "p_m"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be within [0, 1], got {v}")


class InitPolicyKind(Enum):
    STATIONARY_RATIO = "stationary_ratio"
    ALL_EXPLOITERS = "all_exploiters"
    FIXED_COUNT = "fixed_count"


@dataclass
class InitialStatePolicy:
    kind: InitPolicyKind = InitPolicyKind.STATIONARY_RATIO
    count: int = 0

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if not isinstance(self.count, int) or self.count < 0:
            raise ValueError(f"count must be an integer >= 0, got {self.count}")


def dmp_step(state: AgentState, params: DmpParams,
             rng: np.random.Generator) -> AgentState:
    """One switching decision; consumes exactly one uniform draw per call.

    Callers skip the call entirely when the relevant probability is zero,
    which keeps no-messenger runs stream-identical to the baseline.
    """
    u = rng.random()
    if state is AgentState.EXPLOITER:
        return AgentState.MESSENGER if u < params.p_m else state
    return AgentState.EXPLOITER if u < params.p_e else state


def apply_transition_side_effects(agent: Agent, old: AgentState,
                                  new: AgentState, landscape: Landscape,
                                  rng: np.random.Generator,
                                  noise_sigma: float = 0.0) -> Agent:
    """State bookkeeping at a transition.

    Entering messenger freezes the carried opinion and clears the heading so
    a fresh transport direction is drawn on the first move of the stint.
    Returning to exploiter resamples the opinion at the current position and
    discards motion memory: the gradient memory zeroes and prev_pos snaps to
    the current position so the next gradient sample is zero through the
    small-displacement guard; prev_dissonance is refreshed on the next tick.
    """
    if old == new:
        raise ValueError("side effects apply only to actual transitions")
    agent = replace(agent, state=new, heading=None)
    if new is AgentState.EXPLOITER:
        opinion = sample_environment(landscape, agent.pos, noise_sigma, rng)
        return replace(agent, opinion=opinion, grad_mem=Vec2(0.0, 0.0),
                       prev_pos=agent.pos, prev_dissonance=0.0)
    return agent


def expected_sojourn_time(params: DmpParams) -> float:
    """Mean ticks spent in a state before switching, averaged over states."""
    if params.p_e <= 0 or params.p_m <= 0:
        raise ValueError("expected sojourn time requires p_e > 0 and p_m > 0")
    return 0.5 * (params.p_e + params.p_m) / (params.p_e * params.p_m)


def expected_messenger_ratio(params: DmpParams) -> float:
    """Stationary fraction of agents in the messenger state."""
    total = params.p_e + params.p_m
    if total <= 0:
        raise ValueError("expected messenger ratio requires p_e + p_m > 0")
    return params.p_m / total


def stationary_ratio_or_zero(params: DmpParams) -> float:
    """Stationary messenger fraction, 0 when both probabilities are zero."""
    total = params.p_e + params.p_m
    return params.p_m / total if total > 0 else 0.0


def initial_state(policy: InitialStatePolicy, params: DmpParams,
                  agent_index: int, rng: np.random.Generator) -> AgentState:
    """Initial state for one agent under the given policy.

    StationaryRatio draws one uniform per agent only when the stationary
    fraction is positive; FixedCount assigns agents 0..count-1 as messengers
    without consuming randomness.
    """
    if policy.kind is InitPolicyKind.ALL_EXPLOITERS:
        return AgentState.EXPLOITER
    if policy.kind is InitPolicyKind.FIXED_COUNT:
        return (AgentState.MESSENGER if agent_index < policy.count
                else AgentState.EXPLOITER)
    ratio = stationary_ratio_or_zero(params)
    if ratio <= 0.0:
        return AgentState.EXPLOITER
    return AgentState.MESSENGER if rng.random() < ratio else AgentState.EXPLOITER


@dataclass
class StateEnsembleResult:
    """Switching-only ensemble statistics over n_agents x t_final ticks."""

    messenger_fraction: np.ndarray  # fraction per tick, length t_final + 1
    exploiter_sojourns: np.ndarray  # completed sojourn lengths, in ticks
    messenger_sojourns: np.ndarray


def simulate_states(params: DmpParams, n_agents: int, t_final: int,
                    master_seed: int, run_index: int = 0,
                    policy: InitialStatePolicy | None = None) -> StateEnsembleResult:
    """Evolve switching states only, on the same per-agent streams the full
    simulation uses, and collect the messenger fraction plus every completed
    sojourn length. Requires p_e > 0 and p_m > 0.

    The initial-draw skipping mirrors a full run with measurement noise
    enabled (sigma > 0, the default), so state trajectories match such runs
    tick for tick.
    """
    if params.p_e <= 0 or params.p_m <= 0:
        raise ValueError("state ensemble requires p_e > 0 and p_m > 0")
    policy = policy or InitialStatePolicy(InitPolicyKind.STATIONARY_RATIO)

    is_m = np.zeros(n_agents, dtype=bool)
    for i in range(n_agents):
        g = derive_generator(master_seed, run_index, i, 0)
        # skip the position and opinion draws the full simulation makes first
        g.uniform(0.0, 1.0, size=2)
        g.standard_normal()
        is_m[i] = initial_state(policy, params, i, g) is AgentState.MESSENGER

    bank = StreamBank(master_seed, run_index, n_agents, PURPOSE_STATE, "random")
    all_idx = np.arange(n_agents)
    entered = np.zeros(n_agents, dtype=np.int64)
    frac = np.empty(t_final + 1, dtype=np.float64)
    frac[0] = is_m.mean() if n_agents else 0.0
    e_sojourns: list[np.ndarray] = []
    m_sojourns: list[np.ndarray] = []

    for t in range(1, t_final + 1):
        u = bank.take(all_idx)
        switch = u < np.where(is_m, params.p_e, params.p_m)
        idx = np.flatnonzero(switch)
        if idx.size:
            lengths = t - entered[idx]
            was_m = is_m[idx]
            m_sojourns.append(lengths[was_m])
            e_sojourns.append(lengths[~was_m])
            entered[idx] = t
            is_m[idx] = ~is_m[idx]
        frac[t] = is_m.mean()

    cat = (lambda parts: np.concatenate(parts) if parts
           else np.empty(0, dtype=np.int64))
    return StateEnsembleResult(messenger_fraction=frac,
                               exploiter_sojourns=cat(e_sojourns),
                               messenger_sojourns=cat(m_sojourns))
