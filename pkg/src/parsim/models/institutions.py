"""Communicating-institutions model: information tokens spreading over
directed channels.

Each agent rebroadcasts everything it holds every tick and unions whatever
arrives into its holdings, so a token is never forgotten and coverage only
grows. Agents with initial tokens broadcast them once at initialization,
which makes a reliability-1 chain of length L reach its last agent at tick
L - 1 (one hop per tick).
"""

from __future__ import annotations

from ..comms import _broadcast, read_inbox
from ..kernel import (
    INT,
    REAL,
    SYMBOL,
    ModelDefinition,
    ValueSpec,
    new_state,
    register_model,
    spawn_agent,
)
from ..observation import CIRCLE, PointOfView, ProbeDef, VisualAttrs
from ..rng import SplitMix64
from ..state import Agent, Channel, EntityId, SimulationState

KIND = "institution"
TOKEN = "t0"

HOLDER_COLOR = (0, 180, 0)
EMPTY_COLOR = (150, 150, 150)


def holdings(agent: Agent) -> set[str]:
    raw = agent.attrs["tokens"]
    return set(raw.split(",")) if raw else set()


def set_holdings(agent: Agent, tokens: set[str]) -> None:
    agent.attrs["tokens"] = ",".join(sorted(tokens))


def _wire(state: SimulationState, params: dict) -> list[tuple[int, int]]:
    n = params["agents"]
    wiring = params["wiring"]
    if wiring == "chain":
        return [(i, i + 1) for i in range(n - 1)]
    if wiring == "ring":
        return [(i, (i + 1) % n) for i in range(n)]
    # complete: every ordered pair, lexicographic
    return [(i, j) for i in range(n) for j in range(n) if i != j]


def _init(params: dict, rng: SplitMix64) -> SimulationState:
    n = params["agents"]
    state = new_state(MODEL, params, n, 1, "bounded")
    for i in range(n):
        spawn_agent(state, KIND, 0, i, {"tokens": ""})
    if not 0 <= params["token_at"] < n:
        from ..errors import RangeViolationError
        raise RangeViolationError(f"token_at {params['token_at']} outside 0..{n - 1}")
    set_holdings(state.agents[params["token_at"]], {TOKEN})
    for i, j in _wire(state, params):
        state.channels.append(Channel(EntityId(KIND, i), EntityId(KIND, j),
                                      params["reliability"]))
    # Tick-0 broadcast of initial placements, so diffusion starts moving
    # on the very first step.
    for agent in state.agents:
        for token in sorted(holdings(agent)):
            _broadcast(state, rng, agent.entity_id, "token", token)
    return state


def _agent_step(state: SimulationState, agent: Agent, rng: SplitMix64) -> None:
    held = holdings(agent)
    for msg in read_inbox(state, agent.entity_id):
        held.add(msg.payload)
    set_holdings(agent, held)
    for token in sorted(held):
        _broadcast(state, rng, agent.entity_id, "token", token)


def _coverage(state: SimulationState) -> float:
    agents = [a for a in state.agents if a.alive]
    if not agents:
        return 0.0
    return sum(1 for a in agents if TOKEN in holdings(a)) / len(agents)


def _in_transit(state: SimulationState) -> float:
    return float(sum(len(mb.pending) for mb in state.mailboxes.values()))


def _patch_view(attrs: dict) -> VisualAttrs:
    return VisualAttrs((255, 255, 255))


def _agent_view(attrs: dict) -> VisualAttrs:
    color = HOLDER_COLOR if TOKEN in (attrs["tokens"] or "").split(",") else EMPTY_COLOR
    return VisualAttrs(color, CIRCLE, 0.8)


MODEL = ModelDefinition(
    name="institutions",
    params={
        "agents": ValueSpec(INT, default=5, lo=1),
        "reliability": ValueSpec(REAL, default=1.0, lo=0.0, hi=1.0),
        "wiring": ValueSpec(SYMBOL, default="chain",
                            choices=("chain", "ring", "complete")),
        "token_at": ValueSpec(INT, default=0, lo=0),
    },
    patch_attrs={},
    agent_attrs={KIND: {"tokens": ValueSpec(SYMBOL, default="")}},
    init=_init,
    agent_step=_agent_step,
    probes=[ProbeDef("coverage", _coverage), ProbeDef("in_transit", _in_transit)],
    povs={"tokens": PointOfView("tokens", _patch_view, {KIND: _agent_view})},
    description="Institutions exchanging information tokens over channels.",
)

register_model(MODEL)
