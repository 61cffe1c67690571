"""Closed-form landscape fields for contour backgrounds.

The simulator publishes its landscape definition (kind, arena size,
parameters, ground-truth value) in the resolved config file. These
evaluators mirror the published closed forms so scatter figures can draw
iso-contours from that file alone, without importing the simulator.
"""

from __future__ import annotations

from typing import Mapping

import numpy as np

KNOWN_KINDS: tuple[str, ...] = (
    "radial_cone",
    "planar_gradient",
    "bimodal_gaussian",
    "ridge",
)

# parameter names each kind requires in the resolved config
REQUIRED_PARAMS: dict[str, tuple[str, ...]] = {
    "radial_cone": ("center_x", "center_y"),
    "planar_gradient": ("slope",),
    "bimodal_gaussian": ("a1", "a2", "w1", "w2", "c1x", "c1y", "c2x", "c2y"),
    "ridge": (),
}


def field_values(kind: str, params: Mapping[str, float], width: float,
                 x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Evaluate the landscape field on arrays of positions."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if kind == "radial_cone":
        return np.hypot(x - params["center_x"], y - params["center_y"])
    if kind == "planar_gradient":
        return params["slope"] * x
    if kind == "bimodal_gaussian":
        b1 = params["a1"] * np.exp(
            -((x - params["c1x"]) ** 2 + (y - params["c1y"]) ** 2) / (2.0 * params["w1"] ** 2))
        b2 = params["a2"] * np.exp(
            -((x - params["c2x"]) ** 2 + (y - params["c2y"]) ** 2) / (2.0 * params["w2"] ** 2))
        return b1 + b2
    if kind == "ridge":
        return np.abs(x - width / 2.0) / width
    raise ValueError(f"unknown landscape kind '{kind}'")
