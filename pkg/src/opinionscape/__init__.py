"""Agent-based opinion dynamics on continuous information landscapes.

Agents sample a noisy scalar landscape, exchange opinions within a limited
communication radius, and climb a pseudo-gradient of decreasing social
dissonance. Homophily plus limited range produces fragmented echo chambers;
a stochastic messenger role (frozen opinion, random walk) restores collective
accuracy. The package provides the deterministic simulator, Monte-Carlo sweep
harnesses, metrics, a validated configuration schema, and a CLI.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .config import (CONFIG_VERSION, ConfigError, FullConfig, OutputSettings,
                     SweepSettings, config_to_dict, default_config,
                     load_config, parse_config, serialize_config)
from .dmp import (DmpParams, InitialStatePolicy, InitPolicyKind,
                  StateEnsembleResult, apply_transition_side_effects,
                  dmp_step, expected_messenger_ratio, expected_sojourn_time,
                  initial_state, simulate_states, stationary_ratio_or_zero)
from .engine import (DEFAULT_SNAPSHOT_TICKS, RunResult, SimConfig,
                     config_fingerprint, run_simulation)
from .landscape import (Arena, Landscape, LandscapeKind,
                        make_bimodal_gaussian, make_landscape,
                        make_planar_gradient, make_radial_cone, make_ridge)
from .metrics import (TickMetrics, adjacency_from_positions, count_clusters,
                      normalize_to_baseline, opinion_precision_error,
                      population_variance, spatial_precision_error)
from .model import (GRAD_GUARD, Agent, AgentState, ModelParams, Vec2,
                    compute_neighbors, dissonance, exploiter_tick,
                    local_mean_opinion, messenger_step, movement_direction,
                    sample_environment, take_step, update_gradient_estimate,
                    update_opinion)
from .streams import (PURPOSE_INIT, PURPOSE_NOISE, PURPOSE_STATE,
                      PURPOSE_WALK, StreamBank, derive_generator,
                      seed_streams)
from .sweep import (CellAggregate, CellAnnotation, ConnectivityRow,
                    RunFailure, SweepOutcome, SweepSpec, analyze_cells,
                    baseline_config, connectivity_sweep, log_grid, run_sweep)

__all__ = [
    "__version__",
    "Agent", "AgentState", "Arena", "CellAggregate", "CellAnnotation",
    "CONFIG_VERSION", "ConfigError", "ConnectivityRow",
    "DEFAULT_SNAPSHOT_TICKS", "DmpParams", "FullConfig", "GRAD_GUARD",
    "InitialStatePolicy", "InitPolicyKind", "Landscape", "LandscapeKind",
    "ModelParams", "OutputSettings", "PURPOSE_INIT", "PURPOSE_NOISE",
    "PURPOSE_STATE", "PURPOSE_WALK", "RunFailure", "RunResult",
    "SimConfig", "StateEnsembleResult", "StreamBank", "SweepOutcome",
    "SweepSettings", "SweepSpec", "TickMetrics", "Vec2",
    "adjacency_from_positions", "analyze_cells",
    "apply_transition_side_effects", "baseline_config", "compute_neighbors",
    "config_fingerprint", "config_to_dict", "connectivity_sweep",
    "count_clusters", "default_config", "derive_generator", "dissonance",
    "dmp_step", "expected_messenger_ratio", "expected_sojourn_time",
    "exploiter_tick", "initial_state", "load_config", "local_mean_opinion",
    "log_grid", "make_bimodal_gaussian", "make_landscape",
    "make_planar_gradient", "make_radial_cone", "make_ridge",
    "messenger_step", "movement_direction", "normalize_to_baseline",
    "opinion_precision_error", "parse_config", "population_variance",
    "run_simulation", "run_sweep", "sample_environment", "seed_streams",
    "serialize_config", "simulate_states", "spatial_precision_error",
    "stationary_ratio_or_zero", "take_step", "update_gradient_estimate",
    "update_opinion",
]
