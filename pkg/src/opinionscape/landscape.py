"""Information landscapes: bounded scalar fields over a rectangular arena.

Each landscape stores its closed-form spatial mean (`ground_truth`), the
value a perfectly mixed collective should estimate. The closed form is
checked against adaptive quadrature at construction time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import integrate

_GROUND_TRUTH_RTOL = 1e-6


@dataclass(frozen=True)
class Arena:
    """Rectangle [0, width] x [0, height] with reflective walls."""

    width: float = 2.0
    height: float = 2.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.width) and self.width > 0):
            raise ValueError(f"arena width must be > 0, got {self.width}")
        if not (math.isfinite(self.height) and self.height > 0):
            raise ValueError(f"arena height must be > 0, got {self.height}")

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)

    def contains(self, x: float, y: float) -> bool:
        return 0.0 <= x <= self.width and 0.0 <= y <= self.height


class LandscapeKind(Enum):
    RADIAL_CONE = "radial_cone"
    PLANAR_GRADIENT = "planar_gradient"
    BIMODAL_GAUSSIAN = "bimodal_gaussian"
    RIDGE = "ridge"


@dataclass(frozen=True)
class Landscape:
    """A scalar field f over an arena plus its exact spatial mean."""

    kind: LandscapeKind
    arena: Arena
    params: dict = field(default_factory=dict)
    ground_truth: float = 0.0

    def value(self, x, y):
        """Evaluate f at (x, y); accepts scalars or numpy arrays."""
        p = self.params
        if self.kind is LandscapeKind.RADIAL_CONE:
            return np.hypot(x - p["center_x"], y - p["center_y"])
        if self.kind is LandscapeKind.PLANAR_GRADIENT:
            return p["slope"] * np.asarray(x, dtype=np.float64) + 0.0
        if self.kind is LandscapeKind.BIMODAL_GAUSSIAN:
            g1 = p["a1"] * np.exp(-((x - p["c1x"]) ** 2 + (y - p["c1y"]) ** 2)
                                  / (2.0 * p["w1"] ** 2))
            g2 = p["a2"] * np.exp(-((x - p["c2x"]) ** 2 + (y - p["c2y"]) ** 2)
                                  / (2.0 * p["w2"] ** 2))
            return g1 + g2
        return np.abs(np.asarray(x, dtype=np.float64) - self.arena.width / 2.0) \
            / self.arena.width


def _corner_cone_integral(a: float, b: float) -> float:
    # closed form of the distance integral over [0,a]x[0,b] from the origin
    if a == 0.0 or b == 0.0:
        return 0.0
    r = math.hypot(a, b)
    return (2.0 * a * b * r
            + b ** 3 * math.asinh(a / b)
            + a ** 3 * math.asinh(b / a)) / 6.0


def _gauss_strip_integral(c: float, span: float, w: float) -> float:
    # integral of exp(-(u-c)^2 / (2 w^2)) over u in [0, span]
    s = math.sqrt(2.0) * w
    return w * math.sqrt(math.pi / 2.0) * (math.erf((span - c) / s)
                                           + math.erf(c / s))


def _verify_ground_truth(ls: Landscape) -> None:
    area = ls.arena.width * ls.arena.height
    total, _ = integrate.dblquad(lambda y, x: float(ls.value(x, y)),
                                 0.0, ls.arena.width, 0.0, ls.arena.height)
    numeric = total / area
    if abs(numeric - ls.ground_truth) > _GROUND_TRUTH_RTOL * abs(ls.ground_truth):
        raise ValueError(
            f"{ls.kind.value} ground truth {ls.ground_truth!r} disagrees with "
            f"quadrature {numeric!r}")


def _finite(name: str, v: float) -> float:
    v = float(v)
    if not math.isfinite(v):
        raise ValueError(f"landscape parameter {name} must be finite, got {v}")
    return v


def make_radial_cone(arena: Arena | None = None, center: tuple | None = None) -> Landscape:
    """f(p) = distance from p to the center (default: arena center)."""
    arena = arena or Arena()
    if center is None:
        center = (arena.width / 2.0, arena.height / 2.0)
    cx = _finite("center_x", center[0])
    cy = _finite("center_y", center[1])
    w, h = arena.width, arena.height
    gt = (_corner_cone_integral(cx, cy)
          + _corner_cone_integral(w - cx, cy)
          + _corner_cone_integral(cx, h - cy)
          + _corner_cone_integral(w - cx, h - cy)) / (w * h)
    ls = Landscape(LandscapeKind.RADIAL_CONE, arena,
                   {"center_x": cx, "center_y": cy}, gt)
    _verify_ground_truth(ls)
    return ls


def make_planar_gradient(arena: Arena | None = None, slope: float | None = None) -> Landscape:
    """f(p) = slope * x; default slope 1/width normalizes f onto [0, 1]."""
    arena = arena or Arena()
    if slope is None:
        slope = 1.0 / arena.width
    slope = _finite("slope", slope)
    gt = slope * arena.width / 2.0
    ls = Landscape(LandscapeKind.PLANAR_GRADIENT, arena, {"slope": slope}, gt)
    if gt != 0.0:
        _verify_ground_truth(ls)
    return ls


def make_bimodal_gaussian(arena: Arena | None = None,
                          centers: tuple | None = None,
                          amplitudes: tuple = (1.0, 1.0),
                          widths: tuple | None = None) -> Landscape:
    """Sum of two Gaussian bumps; defaults sit on the horizontal midline."""
    arena = arena or Arena()
    if centers is None:
        centers = ((arena.width / 4.0, arena.height / 2.0),
                   (3.0 * arena.width / 4.0, arena.height / 2.0))
    if widths is None:
        s = 0.15 * min(arena.width, arena.height)
        widths = (s, s)
    p = {
        "a1": _finite("a1", amplitudes[0]),
        "a2": _finite("a2", amplitudes[1]),
        "w1": _finite("w1", widths[0]),
        "w2": _finite("w2", widths[1]),
        "c1x": _finite("c1x", centers[0][0]),
        "c1y": _finite("c1y", centers[0][1]),
        "c2x": _finite("c2x", centers[1][0]),
        "c2y": _finite("c2y", centers[1][1]),
    }
    if p["w1"] <= 0 or p["w2"] <= 0:
        raise ValueError("gaussian widths must be > 0")
    w, h = arena.width, arena.height
    area = w * h
    gt = (p["a1"] * _gauss_strip_integral(p["c1x"], w, p["w1"])
          * _gauss_strip_integral(p["c1y"], h, p["w1"])
          + p["a2"] * _gauss_strip_integral(p["c2x"], w, p["w2"])
          * _gauss_strip_integral(p["c2y"], h, p["w2"])) / area
    ls = Landscape(LandscapeKind.BIMODAL_GAUSSIAN, arena, p, gt)
    _verify_ground_truth(ls)
    return ls


def make_ridge(arena: Arena | None = None) -> Landscape:
    """f(p) = |x - width/2| / width, a V-shaped valley along the midline."""
    arena = arena or Arena()
    ls = Landscape(LandscapeKind.RIDGE, arena, {}, 0.25)
    _verify_ground_truth(ls)
    return ls


_MAKERS = {
    LandscapeKind.RADIAL_CONE: make_radial_cone,
    LandscapeKind.PLANAR_GRADIENT: make_planar_gradient,
    LandscapeKind.BIMODAL_GAUSSIAN: make_bimodal_gaussian,
    LandscapeKind.RIDGE: make_ridge,
}


def make_landscape(kind: LandscapeKind | str, arena: Arena | None = None,
                   **kwargs) -> Landscape:
    """Construct a landscape by kind with that kind's keyword parameters."""
    kind = LandscapeKind(kind) if isinstance(kind, str) else kind
    return _MAKERS[kind](arena, **kwargs)


# flat parameter names each kind accepts in configuration files
FLAT_PARAM_KEYS = {
    LandscapeKind.RADIAL_CONE: ("center_x", "center_y"),
    LandscapeKind.PLANAR_GRADIENT: ("slope",),
    LandscapeKind.BIMODAL_GAUSSIAN: ("a1", "a2", "w1", "w2",
                                     "c1x", "c1y", "c2x", "c2y"),
    LandscapeKind.RIDGE: (),
}


def landscape_from_flat(kind: LandscapeKind | str, arena: Arena,
                        flat: dict) -> Landscape:
    """Build a landscape from flat config keys, defaulting absent ones."""
    kind = LandscapeKind(kind) if isinstance(kind, str) else kind
    unknown = set(flat) - set(FLAT_PARAM_KEYS[kind])
    if unknown:
        raise ValueError(
            f"unknown {kind.value} parameter: {sorted(unknown)[0]}")
    if kind is LandscapeKind.RADIAL_CONE:
        return make_radial_cone(arena, (
            flat.get("center_x", arena.width / 2.0),
            flat.get("center_y", arena.height / 2.0)))
    if kind is LandscapeKind.PLANAR_GRADIENT:
        return make_planar_gradient(arena, flat.get("slope"))
    if kind is LandscapeKind.BIMODAL_GAUSSIAN:
        s = 0.15 * min(arena.width, arena.height)
        return make_bimodal_gaussian(
            arena,
            centers=((flat.get("c1x", arena.width / 4.0),
                      flat.get("c1y", arena.height / 2.0)),
                     (flat.get("c2x", 3.0 * arena.width / 4.0),
                      flat.get("c2y", arena.height / 2.0))),
            amplitudes=(flat.get("a1", 1.0), flat.get("a2", 1.0)),
            widths=(flat.get("w1", s), flat.get("w2", s)))
    return make_ridge(arena)
