"""Probes (per-tick scalar measurements) and points of view (entity state
to visual attributes). Both are pure: they never mutate the state and
never consume random draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .errors import ExportError, UnknownEntityError
from .state import EntityId, SimulationState

CELL_FILL = "cell-fill"
CIRCLE = "circle"


@dataclass(frozen=True)
class VisualAttrs:
    color: tuple[int, int, int]
    shape: str = CELL_FILL
    size: float = 1.0

    def __post_init__(self):
        for ch in self.color:
            if not 0 <= ch <= 255:
                raise ValueError(f"color component {ch} out of range")
        if self.shape not in (CELL_FILL, CIRCLE):
            raise ValueError(f"unknown shape {self.shape!r}")
        if not 0.0 < self.size <= 1.0:
            raise ValueError(f"size {self.size} outside (0, 1]")


@dataclass(frozen=True)
class ProbeDef:
    name: str
    expression: Callable[[SimulationState], float]


@dataclass
class ProbeSeries:
    name: str
    samples: list[tuple[int, float]] = field(default_factory=list)

    def append(self, tick: int, value: float) -> None:
        if self.samples and tick != self.samples[-1][0] + 1:
            raise ExportError(
                f"probe {self.name!r}: tick {tick} not contiguous")
        self.samples.append((tick, value))


@dataclass(frozen=True)
class PointOfView:
    """Named pure mapping from entity state to visual attributes.

    patch_view maps a patch attribute record; agent_views maps each agent
    kind's attribute record.
    """

    name: str
    patch_view: Callable[[dict], VisualAttrs]
    agent_views: dict[str, Callable[[dict], VisualAttrs]] = field(default_factory=dict)


@dataclass
class RenderFrame:
    width: int
    height: int
    cells: list[VisualAttrs]  # row-major
    agents: list[tuple[EntityId, int, int, VisualAttrs]]  # ordered by id

    def to_wire(self) -> dict:
        """Canonical wire form: flat row-major RGB plus agent overlays.
        Later agents draw on top of earlier ones."""
        flat: list[int] = []
        for va in self.cells:
            flat.extend(va.color)
        return {
            "cells": flat,
            "agents": [
                {
                    "id": {"kind": eid.kind, "index": eid.index},
                    "row": row,
                    "col": col,
                    "color": list(va.color),
                    "shape": va.shape,
                    "size": va.size,
                }
                for eid, row, col, va in self.agents
            ],
        }


def sample_probes(state: SimulationState, defs: list[ProbeDef]) -> dict[str, float]:
    """Evaluate every probe on the same state. A failing probe yields NaN
    for that probe instead of aborting the sweep."""
    out: dict[str, float] = {}
    for probe in defs:
        try:
            out[probe.name] = float(probe.expression(state))
        except Exception:
            out[probe.name] = math.nan
    return out


def format_real(v: float) -> str:
    """Round-trip-exact decimal text; integral values print without a
    trailing .0 (so counts read naturally in CSV)."""
    v = float(v)
    if math.isfinite(v) and v.is_integer():
        return str(int(v))
    return repr(v)


def export_csv(series: list[ProbeSeries]) -> str:
    if not series:
        raise ExportError("nothing to export: empty series list")
    ticks = [t for t, _ in series[0].samples]
    for s in series[1:]:
        if [t for t, _ in s.samples] != ticks:
            raise ExportError("ragged probe series: tick ranges differ")
    lines = ["tick," + ",".join(s.name for s in series)]
    for i, tick in enumerate(ticks):
        row = [str(tick)] + [format_real(s.samples[i][1]) for s in series]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> list[ProbeSeries]:
    lines = [ln for ln in text.split("\n") if ln]
    if not lines:
        raise ExportError("empty CSV")
    header = lines[0].split(",")
    if header[0] != "tick" or len(header) < 2:
        raise ExportError("malformed CSV header")
    series = [ProbeSeries(name) for name in header[1:]]
    for ln in lines[1:]:
        cells = ln.split(",")
        if len(cells) != len(header):
            raise ExportError(f"row width mismatch: {ln!r}")
        tick = int(cells[0])
        for s, cell in zip(series, cells[1:]):
            s.samples.append((tick, float(cell)))
    return series


def render_pov(state: SimulationState, pov: PointOfView) -> RenderFrame:
    """Render one frame: per-cell visuals from the patch view, then live
    agents ordered by (kind, index) so overlaps resolve deterministically."""
    cells = []
    for i in range(state.width * state.height):
        attrs = {name: col[i] for name, col in state.patch_attrs.items()}
        cells.append(pov.patch_view(attrs))
    agents = []
    for agent in sorted(state.live_agents(), key=lambda a: (a.kind, a.index)):
        view = pov.agent_views.get(agent.kind)
        if view is None:
            raise UnknownEntityError(
                f"point of view {pov.name!r} has no mapping for kind {agent.kind!r}")
        agents.append((agent.entity_id, agent.row, agent.col, view(agent.attrs)))
    return RenderFrame(state.width, state.height, cells, agents)


def ramp(t: float, low: tuple[int, int, int], high: tuple[int, int, int]) -> tuple[int, int, int]:
    """Linear color ramp with t clamped to [0, 1]."""
    t = max(0.0, min(1.0, t))
    return tuple(int(round(lo + t * (hi - lo))) for lo, hi in zip(low, high))
