"""Figure-spec schema: what to draw, from which files, to which image.

A spec file is a small YAML mapping:

    figure: phase_heatmap
    inputs:
      aggregate: sweep/sweep_aggregate.csv
    output: heatmap.png
    options:
      iso_ratios: [0.5]

Relative input and output paths resolve against the spec file's
directory. Every referenced input must exist at parse time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Mapping

import yaml


class SpecError(ValueError):
    """A figure spec is malformed or references a missing input."""


class FigureKind(Enum):
    PHASE_HEATMAP = "phase_heatmap"
    CONNECTIVITY_CURVES = "connectivity_curves"
    SNAPSHOT_SCATTER = "snapshot_scatter"
    TEMPORAL_PANELS = "temporal_panels"


# input roles each figure kind consumes, all mandatory
REQUIRED_INPUTS: dict[FigureKind, tuple[str, ...]] = {
    FigureKind.PHASE_HEATMAP: ("aggregate",),
    FigureKind.CONNECTIVITY_CURVES: ("connectivity",),
    FigureKind.SNAPSHOT_SCATTER: ("snapshot", "config"),
    FigureKind.TEMPORAL_PANELS: ("metrics",),
}

_TOP_LEVEL_KEYS = frozenset({"figure", "inputs", "output", "options"})


@dataclass(frozen=True)
class FigureSpec:
    """Validated description of one figure to render."""

    kind: FigureKind
    inputs: Mapping[str, Path]
    output: Path
    options: Mapping[str, Any] = field(default_factory=dict)


def _kind_from_name(name: Any) -> FigureKind:
    try:
        return FigureKind(str(name))
    except ValueError:
        valid = ", ".join(k.value for k in FigureKind)
        raise SpecError(f"unknown figure kind {name!r}; expected one of: {valid}") from None


def parse_spec(doc: Any, base_dir: Path) -> FigureSpec:
    """Validate a decoded spec document and resolve its paths."""
    if not isinstance(doc, dict):
        raise SpecError("spec must be a mapping of figure/inputs/output/options")
    unknown = sorted(set(doc) - _TOP_LEVEL_KEYS)
    if unknown:
        raise SpecError(f"unknown spec keys: {', '.join(unknown)}")
    if "figure" not in doc:
        raise SpecError("spec is missing required key 'figure'")
    kind = _kind_from_name(doc["figure"])

    raw_inputs = doc.get("inputs")
    if not isinstance(raw_inputs, dict) or not raw_inputs:
        raise SpecError("spec key 'inputs' must be a non-empty mapping of role to path")
    required = REQUIRED_INPUTS[kind]
    missing = [role for role in required if role not in raw_inputs]
    if missing:
        raise SpecError(f"figure '{kind.value}' is missing inputs: {', '.join(missing)}")
    extra = sorted(set(raw_inputs) - set(required))
    if extra:
        raise SpecError(f"figure '{kind.value}' does not accept inputs: {', '.join(extra)}")
    inputs: dict[str, Path] = {}
    for role in required:
        value = raw_inputs[role]
        if not isinstance(value, str) or not value:
            raise SpecError(f"input '{role}' must be a non-empty path string")
        path = (base_dir / value).resolve() if not Path(value).is_absolute() else Path(value)
        if not path.is_file():
            raise SpecError(f"input '{role}' not found: {path}")
        inputs[role] = path

    raw_output = doc.get("output")
    if not isinstance(raw_output, str) or not raw_output:
        raise SpecError("spec key 'output' must be a non-empty path string")
    output = Path(raw_output)
    if not output.is_absolute():
        output = (base_dir / output).resolve()

    options = doc.get("options", {})
    if options is None:
        options = {}
    if not isinstance(options, dict):
        raise SpecError("spec key 'options' must be a mapping")
    return FigureSpec(kind=kind, inputs=inputs, output=output, options=dict(options))


def load_spec(path: str | Path) -> FigureSpec:
    """Read and validate a YAML figure-spec file."""
    path = Path(path)
    if not path.is_file():
        raise SpecError(f"spec file not found: {path}")
    try:
        doc = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise SpecError(f"{path}: invalid YAML: {exc}") from exc
    return parse_spec(doc, path.resolve().parent)
