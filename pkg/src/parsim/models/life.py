"""Conway's Game of Life on a bounded or toroidal grid.

Pure patch model: no agents, no messages. Cells are born with exactly 3
live neighbors and survive with 2 or 3 (B3/S23). One tick = one
generation.
"""

from __future__ import annotations

from .. import kernels
from ..kernel import (
    BOOL,
    INT,
    REAL,
    SYMBOL,
    ModelDefinition,
    ValueSpec,
    new_state,
    register_model,
)
from ..observation import PointOfView, ProbeDef, VisualAttrs
from ..rng import SplitMix64
from ..state import SimulationState

ALIVE_COLOR = (0, 255, 0)
DEAD_COLOR = (0, 0, 0)


def next_cell(alive: bool, live_neighbors: int) -> bool:
    """Single-cell rule: born on 3, survives on 2 or 3."""
    if not 0 <= live_neighbors <= 8:
        raise ValueError(f"neighbor count {live_neighbors} outside 0..8")
    return live_neighbors == 3 or (alive and live_neighbors == 2)


def _init(params: dict, rng: SplitMix64) -> SimulationState:
    state = new_state(MODEL, params, params["width"], params["height"],
                      params["topology"])
    if params["initial"] == "random":
        alive = state.patch_attrs["alive"]
        density = params["density"]
        for i in range(len(alive)):
            alive[i] = rng.random() < density
    return state


def _patch_phase(state: SimulationState) -> None:
    alive = state.patch_attrs["alive"]
    nxt = kernels.life_next([1 if a else 0 for a in alive],
                            state.width, state.height,
                            state.topology == "torus")
    state.patch_attrs["alive"] = [bool(v) for v in nxt]


def _count_alive(state: SimulationState) -> float:
    return float(sum(1 for a in state.patch_attrs["alive"] if a))


def _count_dead(state: SimulationState) -> float:
    return float(sum(1 for a in state.patch_attrs["alive"] if not a))


def _cell_view(attrs: dict) -> VisualAttrs:
    return VisualAttrs(ALIVE_COLOR if attrs["alive"] else DEAD_COLOR)


MODEL = ModelDefinition(
    name="game-of-life",
    params={
        "width": ValueSpec(INT, default=16, lo=1),
        "height": ValueSpec(INT, default=16, lo=1),
        "topology": ValueSpec(SYMBOL, default="torus",
                              choices=("bounded", "torus")),
        "initial": ValueSpec(SYMBOL, default="random",
                             choices=("all-dead", "random")),
        "density": ValueSpec(REAL, default=0.5, lo=0.0, hi=1.0),
    },
    patch_attrs={"alive": ValueSpec(BOOL, default=False)},
    agent_attrs={},
    init=_init,
    patch_phase=_patch_phase,
    probes=[ProbeDef("alive", _count_alive), ProbeDef("dead", _count_dead)],
    povs={"state": PointOfView("state", _cell_view)},
    description="Conway's Game of Life; cells dead (black) or alive (green).",
)

register_model(MODEL)
