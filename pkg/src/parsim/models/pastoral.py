"""Pastoral-unit model: ground water, fresh/dry grass, grazing cows, and
water-consuming trees on a bounded grid. One tick is roughly one week; the
seasonal cycle defaults to 52 ticks with a 16-tick wet season.

All quantitative constants live in the parameter table below so they can
be revised between field workshops; the model card documents each one.
"""

from __future__ import annotations

from .. import kernels
from ..errors import RangeViolationError
from ..kernel import (
    INT,
    REAL,
    ModelDefinition,
    ValueSpec,
    new_state,
    register_model,
    spawn_agent,
)
from ..observation import CIRCLE, PointOfView, ProbeDef, VisualAttrs, ramp
from ..rng import SplitMix64
from ..space import Grid, Neighborhood, neighbors
from ..state import Agent, SimulationState

METABOLISM = 0.05  # fixed per-tick energy cost, paid whether or not a cow moves

COW_COLOR = (255, 0, 0)
TREE_COLOR = (255, 105, 180)
COW_SIZE = 0.6
TREE_SIZE = 0.5


def rain_rate(tick: int, params: dict) -> float:
    """Rain falls during the wet-season part of each cycle."""
    if tick % params["season_length"] < params["wet_season"]:
        return params["rain_rate"]
    return 0.0


def water_update(h: float, tick: int, n_trees: int, params: dict) -> float:
    """Humidity balance for one patch: rain in, evaporation and per-tree
    uptake out, clamped to [0, 1]."""
    hn = h + rain_rate(tick, params) - params["evaporation"] \
        - params["tree_uptake"] * n_trees
    return max(0.0, min(1.0, hn))


def grass_update(f: float, d: float, h: float, params: dict) -> tuple[float, float]:
    """Grass balance for one patch: fresh grass grows toward free capacity
    in proportion to humidity, dries out below the humidity threshold, and
    dry grass decays; fresh + dry <= 1 is maintained by capping dry."""
    growth = params["grass_growth"] * h * (1.0 - f - d)
    dryout = params["dry_rate"] * f if h < params["dry_threshold"] else 0.0
    fn = max(0.0, min(1.0, f + growth - dryout))
    dn = max(0.0, min(1.0, d + dryout - params["dry_decay"] * d))
    return fn, min(dn, 1.0 - fn)


def _init(params: dict, rng: SplitMix64) -> SimulationState:
    if params["wet_season"] > params["season_length"]:
        raise RangeViolationError("wet_season cannot exceed season_length")
    state = new_state(MODEL, params, params["width"], params["height"], "bounded")
    h = state.patch_attrs["humidity"]
    f = state.patch_attrs["fresh"]
    d = state.patch_attrs["dry"]
    # Row-major, three draws per cell; fresh is held below 0.5 and dry
    # below the remaining capacity so fresh + dry <= 1 from the start.
    for i in range(len(h)):
        h[i] = rng.random()
        f[i] = 0.5 * rng.random()
        d[i] = (1.0 - f[i]) * 0.5 * rng.random()
    for _ in range(params["tree_count"]):
        row = rng.below(state.height)
        col = rng.below(state.width)
        spawn_agent(state, "tree", row, col, {"biomass": 0.0})
    for _ in range(params["herd_size"]):
        row = rng.below(state.height)
        col = rng.below(state.width)
        spawn_agent(state, "cow", row, col, {"energy": params["cow_energy"]})
    return state


def _patch_phase(state: SimulationState) -> None:
    trees = [0] * (state.width * state.height)
    for agent in state.agents:
        if agent.alive and agent.kind == "tree":
            trees[state.cell_index(agent.row, agent.col)] += 1
    p = state.params
    h2, f2, d2 = kernels.pastoral_patch_update(
        state.patch_attrs["humidity"],
        state.patch_attrs["fresh"],
        state.patch_attrs["dry"],
        trees,
        rain_rate(state.tick, p),
        p["evaporation"],
        p["tree_uptake"],
        p["grass_growth"],
        p["dry_threshold"],
        p["dry_rate"],
        p["dry_decay"],
    )
    state.patch_attrs["humidity"] = h2
    state.patch_attrs["fresh"] = f2
    state.patch_attrs["dry"] = d2


def cow_candidates(state: SimulationState, row: int, col: int) -> list[tuple[int, int]]:
    """Current cell plus its Moore-1 neighbors, ascending row-major index."""
    grid = Grid(state.width, state.height, state.topology)
    cells = neighbors(grid, (row, col), Neighborhood()) + [(row, col)]
    return sorted(cells, key=lambda rc: rc[0] * state.width + rc[1])


def _cow_step(state: SimulationState, cow: Agent, rng: SplitMix64) -> None:
    fresh = state.patch_attrs["fresh"]
    dry = state.patch_attrs["dry"]
    p = state.params
    best = None
    best_f = -1.0
    for rc in cow_candidates(state, cow.row, cow.col):
        f_here = fresh[rc[0] * state.width + rc[1]]
        if f_here > best_f:  # strict: ties keep the lower row-major index
            best, best_f = rc, f_here
    moved = best != (cow.row, cow.col)
    cow.row, cow.col = best
    i = state.cell_index(cow.row, cow.col)
    bite = min(p["cow_bite"], fresh[i])
    fresh[i] -= bite
    dry_bite = min(p["cow_bite"] - bite, dry[i])
    dry[i] -= dry_bite
    energy = cow.attrs["energy"]
    energy += p["energy_yield"] * (bite + dry_bite) - METABOLISM
    if moved:
        energy -= p["move_cost"]
    cow.attrs["energy"] = energy
    if energy <= 0.0:
        cow.alive = False


def _tree_step(state: SimulationState, tree: Agent, rng: SplitMix64) -> None:
    # Water uptake is already charged in the patch phase; biomass is a
    # display-only accumulator. Trees never move and never die.
    h = state.patch_attrs["humidity"][state.cell_index(tree.row, tree.col)]
    tree.attrs["biomass"] += 0.1 * h


def _agent_step(state: SimulationState, agent: Agent, rng: SplitMix64) -> None:
    if agent.kind == "cow":
        _cow_step(state, agent, rng)
    else:
        _tree_step(state, agent, rng)


def _grass_view(attrs: dict) -> VisualAttrs:
    """White when bare; fresh grass pulls toward green, dry toward yellow,
    mixed proportionally."""
    f, d = attrs["fresh"], attrs["dry"]
    r = int(round(255 * (1.0 - f)))
    b = int(round(255 * max(0.0, 1.0 - f - d)))
    return VisualAttrs((r, 255, b))


def _humidity_view(attrs: dict) -> VisualAttrs:
    return VisualAttrs(ramp(attrs["humidity"], (255, 255, 255), (0, 0, 255)))


def _cow_view(attrs: dict) -> VisualAttrs:
    return VisualAttrs(COW_COLOR, CIRCLE, COW_SIZE)


def _tree_view(attrs: dict) -> VisualAttrs:
    return VisualAttrs(TREE_COLOR, CIRCLE, TREE_SIZE)


_AGENT_VIEWS = {"cow": _cow_view, "tree": _tree_view}


def _total(attr: str):
    def probe(state: SimulationState) -> float:
        return float(sum(state.patch_attrs[attr]))
    return probe


def _mean_humidity(state: SimulationState) -> float:
    h = state.patch_attrs["humidity"]
    return float(sum(h) / len(h))


def _cow_count(state: SimulationState) -> float:
    return float(sum(1 for a in state.agents if a.alive and a.kind == "cow"))


def _cow_energy(state: SimulationState) -> float:
    return float(sum(a.attrs["energy"] for a in state.agents
                     if a.alive and a.kind == "cow"))


def _tree_biomass(state: SimulationState) -> float:
    return float(sum(a.attrs["biomass"] for a in state.agents
                     if a.alive and a.kind == "tree"))


MODEL = ModelDefinition(
    name="pastoral",
    params={
        "width": ValueSpec(INT, default=20, lo=1),
        "height": ValueSpec(INT, default=20, lo=1),
        "season_length": ValueSpec(INT, default=52, lo=1),
        "wet_season": ValueSpec(INT, default=16, lo=0),
        "rain_rate": ValueSpec(REAL, default=0.08, lo=0.0, hi=1.0),
        "evaporation": ValueSpec(REAL, default=0.02, lo=0.0, hi=1.0),
        "tree_uptake": ValueSpec(REAL, default=0.05, lo=0.0, hi=1.0),
        "grass_growth": ValueSpec(REAL, default=0.25, lo=0.0, hi=1.0),
        "dry_threshold": ValueSpec(REAL, default=0.15, lo=0.0, hi=1.0),
        "dry_rate": ValueSpec(REAL, default=0.2, lo=0.0, hi=1.0),
        "dry_decay": ValueSpec(REAL, default=0.05, lo=0.0, hi=1.0),
        "cow_bite": ValueSpec(REAL, default=0.3, lo=0.0, hi=1.0),
        "energy_yield": ValueSpec(REAL, default=1.0, lo=0.0),
        "move_cost": ValueSpec(REAL, default=0.1, lo=0.0, hi=1.0),
        "cow_energy": ValueSpec(REAL, default=1.0, lo=0.0),
        "herd_size": ValueSpec(INT, default=15, lo=0),
        "tree_count": ValueSpec(INT, default=10, lo=0),
    },
    patch_attrs={
        "humidity": ValueSpec(REAL, default=0.0, lo=0.0, hi=1.0),
        "fresh": ValueSpec(REAL, default=0.0, lo=0.0, hi=1.0),
        "dry": ValueSpec(REAL, default=0.0, lo=0.0, hi=1.0),
    },
    agent_attrs={
        "cow": {"energy": ValueSpec(REAL, default=1.0)},
        "tree": {"biomass": ValueSpec(REAL, default=0.0, lo=0.0)},
    },
    init=_init,
    patch_phase=_patch_phase,
    agent_step=_agent_step,
    probes=[
        ProbeDef("fresh_total", _total("fresh")),
        ProbeDef("dry_total", _total("dry")),
        ProbeDef("humidity_mean", _mean_humidity),
        ProbeDef("cow_count", _cow_count),
        ProbeDef("cow_energy_total", _cow_energy),
        ProbeDef("tree_biomass_total", _tree_biomass),
    ],
    povs={
        "grass": PointOfView("grass", _grass_view, _AGENT_VIEWS),
        "humidity": PointOfView("humidity", _humidity_view, _AGENT_VIEWS),
    },
    description="Water, grass, cows, and trees on a pastoral unit; 1 tick ~ 1 week.",
)

register_model(MODEL)
