"""Closed-form guide curves for phase-diagram figures.

Both curves follow from the two-state switching process whose stationary
messenger fraction is m = p_m / (p_e + p_m) and whose mean stint lengths
are 1/p_e (messenger) and 1/p_m (exploiter).
"""

from __future__ import annotations

import numpy as np


def iso_ratio(p_e: np.ndarray, m: float) -> np.ndarray:
    """Curve of constant stationary messenger fraction m: p_m = p_e * m / (1 - m)."""
    if not 0.0 < m < 1.0:
        raise ValueError("iso-ratio fraction m must lie strictly between 0 and 1")
    p_e = np.asarray(p_e, dtype=np.float64)
    return p_e * (m / (1.0 - m))


def iso_sojourn(p_e: np.ndarray, tau: float) -> np.ndarray:
    """Curve of constant mean stint length tau across both roles.

    Solves (1/p_e + 1/p_m) / 2 = tau for p_m; entries where no positive
    solution exists (2 * tau * p_e <= 1) come back as NaN.
    """
    if tau <= 0.0:
        raise ValueError("iso-sojourn stint length tau must be positive")
    p_e = np.asarray(p_e, dtype=np.float64)
    denom = 2.0 * tau * p_e - 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        p_m = np.where(denom > 0.0, p_e / denom, np.nan)
    return p_m
