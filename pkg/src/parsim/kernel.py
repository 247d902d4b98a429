"""Entity schemas, the model registry, and the deterministic step function.

A tick advances through five fixed phases: (1) deliver pending messages,
(2) synchronous patch update from previous-tick values, (3) agents in
seeded-shuffle order, (4) removal of dead agents, (5) probe sampling.
Everything stochastic draws from the single rng stream carried inside the
state, so equal serialized states always produce equal successors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .comms import _deliver_pending
from .errors import (
    RangeViolationError,
    TypeMismatchError,
    UnknownAttributeError,
    UnknownEntityError,
    UnknownModelError,
    UnknownParameterError,
)
from .observation import PointOfView, ProbeDef, sample_probes
from .rng import SplitMix64
from .state import PATCH_KIND, Agent, EntityId, Mailbox, SimulationState

BOOL = "bool"
INT = "int"
REAL = "real"
SYMBOL = "symbol"


@dataclass(frozen=True)
class ValueSpec:
    """Declared type and range of one attribute or parameter."""

    type: str
    default: object = None
    lo: float | None = None
    hi: float | None = None
    choices: tuple[str, ...] | None = None

    def validate(self, name: str, value: object) -> object:
        if self.type == BOOL:
            if not isinstance(value, bool):
                raise TypeMismatchError(f"{name}: expected bool, got {value!r}")
            return value
        if self.type == INT:
            if isinstance(value, bool) or not isinstance(value, int):
                raise TypeMismatchError(f"{name}: expected int, got {value!r}")
        elif self.type == REAL:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise TypeMismatchError(f"{name}: expected real, got {value!r}")
            value = float(value)
        elif self.type == SYMBOL:
            if not isinstance(value, str):
                raise TypeMismatchError(f"{name}: expected symbol, got {value!r}")
            if self.choices is not None and value not in self.choices:
                raise RangeViolationError(
                    f"{name}: {value!r} not one of {self.choices}")
            return value
        else:
            raise TypeMismatchError(f"{name}: unknown declared type {self.type!r}")
        if self.lo is not None and value < self.lo:
            raise RangeViolationError(f"{name}: {value} below minimum {self.lo}")
        if self.hi is not None and value > self.hi:
            raise RangeViolationError(f"{name}: {value} above maximum {self.hi}")
        return value


@dataclass
class ModelDefinition:
    """The full model contract: schemas, step rules, probes, and views.

    Step rules are pure functions of (state, rng); all model state lives in
    the SimulationState they receive.
    """

    name: str
    params: dict[str, ValueSpec]
    patch_attrs: dict[str, ValueSpec]
    agent_attrs: dict[str, dict[str, ValueSpec]]
    init: Callable[[dict, SplitMix64], SimulationState]
    patch_phase: Callable[[SimulationState], None] | None = None
    agent_step: Callable[[SimulationState, Agent, SplitMix64], None] | None = None
    probes: list[ProbeDef] = field(default_factory=list)
    povs: dict[str, PointOfView] = field(default_factory=dict)
    description: str = ""

    def attr_schema(self, kind: str) -> dict[str, ValueSpec]:
        if kind == PATCH_KIND:
            return self.patch_attrs
        try:
            return self.agent_attrs[kind]
        except KeyError:
            raise UnknownEntityError(f"model {self.name!r} has no entity kind {kind!r}")


_REGISTRY: dict[str, ModelDefinition] = {}


def register_model(model: ModelDefinition) -> ModelDefinition:
    _REGISTRY[model.name] = model
    return model


def get_model(name: str) -> ModelDefinition:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise UnknownModelError(f"unknown model {name!r}")


def model_names() -> list[str]:
    return sorted(_REGISTRY)


def validate_params(model: ModelDefinition, overrides: dict) -> dict:
    merged = {name: spec.default for name, spec in model.params.items()}
    for name, value in overrides.items():
        if name not in model.params:
            raise UnknownParameterError(
                f"model {model.name!r} has no parameter {name!r}")
        merged[name] = model.params[name].validate(name, value)
    return merged


# -- state construction helpers (used by model initializers) -------------

def new_state(model: ModelDefinition, params: dict, width: int, height: int,
              topology: str) -> SimulationState:
    if width < 1 or height < 1:
        raise RangeViolationError("grid dimensions must be >= 1")
    return SimulationState(
        tick=0,
        model=model.name,
        params=params,
        width=width,
        height=height,
        topology=topology,
        patch_attrs={name: [spec.default] * (width * height)
                     for name, spec in model.patch_attrs.items()},
        agents=[],
        next_index={},
        channels=[],
        mailboxes={},
        rng=0,
        probe_values={},
    )


def spawn_agent(state: SimulationState, kind: str, row: int, col: int,
                attrs: dict) -> Agent:
    """Create an agent in place; ids are assigned monotonically per kind
    and never reused within a run."""
    index = state.next_index.get(kind, 0)
    state.next_index[kind] = index + 1
    agent = Agent(kind, index, row, col, True, dict(attrs))
    state.agents.append(agent)
    state.mailboxes[agent.entity_id.key()] = Mailbox()
    return agent


# -- core operations -----------------------------------------------------

def init_simulation(model: ModelDefinition | str, params: dict | None = None,
                    seed: int = 0) -> SimulationState:
    """Build the tick-0 state. Identical (model, params, seed) yields
    byte-identical canonical serializations."""
    if isinstance(model, str):
        model = get_model(model)
    merged = validate_params(model, params or {})
    rng = SplitMix64(seed)
    state = model.init(merged, rng)
    state.model = model.name
    state.params = merged
    state.tick = 0
    state.rng = rng.state
    state.probe_values = sample_probes(state, model.probes)
    return state


def _activation_order(agents: list[Agent], rng: SplitMix64) -> list[EntityId]:
    ids = [a.entity_id for a in agents]
    rng.shuffle(ids)
    return ids


def activation_order(state: SimulationState) -> list[EntityId]:
    """The agent-phase permutation the next step will use, computed from
    the state's current rng word (the state itself is not advanced)."""
    return _activation_order(state.live_agents(), SplitMix64.from_state(state.rng))


def step(state: SimulationState) -> SimulationState:
    model = get_model(state.model)
    s = state.clone()
    s.tick += 1
    _deliver_pending(s)
    if model.patch_phase is not None:
        model.patch_phase(s)
    rng = SplitMix64.from_state(s.rng)
    if model.agent_step is not None:
        for eid in _activation_order(s.live_agents(), rng):
            agent = s.find_agent(eid)
            if agent.alive:  # may have died earlier in this phase
                model.agent_step(s, agent, rng)
    _cull_dead(s)
    s.rng = rng.state
    s.probe_values = sample_probes(s, model.probes)
    return s


def _cull_dead(state: SimulationState) -> None:
    dead = {a.entity_id.key() for a in state.agents if not a.alive}
    if not dead:
        return
    state.agents = [a for a in state.agents if a.alive]
    for key in dead:
        state.mailboxes.pop(key, None)
    state.channels = [ch for ch in state.channels
                      if ch.sender.key() not in dead and ch.receiver.key() not in dead]


def run(state: SimulationState, n: int) -> SimulationState:
    if n < 0:
        raise RangeViolationError("tick count must be >= 0")
    for _ in range(n):
        state = step(state)
    return state


# -- inspection and live editing -----------------------------------------

def _resolve(state: SimulationState, entity: EntityId):
    """Return (schema, attrs-dict-like accessor, row, col) for an entity."""
    model = get_model(state.model)
    if entity.kind == PATCH_KIND:
        if not 0 <= entity.index < state.width * state.height:
            raise UnknownEntityError(f"no patch {entity.index}")
        row, col = divmod(entity.index, state.width)
        return model.patch_attrs, None, row, col
    agent = state.find_agent(entity)
    if not agent.alive:
        raise UnknownEntityError(f"agent {entity.key()} is not alive")
    return model.agent_attrs.get(agent.kind, {}), agent, agent.row, agent.col


def get_attribute(state: SimulationState, entity: EntityId, name: str):
    schema, agent, _, _ = _resolve(state, entity)
    if name not in schema:
        raise UnknownAttributeError(f"{entity.kind} has no attribute {name!r}")
    if agent is None:
        return state.patch_attrs[name][entity.index]
    return agent.attrs[name]


def set_attribute(state: SimulationState, entity: EntityId, name: str,
                  value) -> SimulationState:
    """Pure edit: returns a state differing only in that attribute; the
    tick is unchanged and subsequent stepping stays deterministic."""
    schema, _, _, _ = _resolve(state, entity)
    if name not in schema:
        raise UnknownAttributeError(f"{entity.kind} has no attribute {name!r}")
    value = schema[name].validate(name, value)
    new = state.clone()
    if entity.kind == PATCH_KIND:
        new.patch_attrs[name][entity.index] = value
    else:
        new.find_agent(entity).attrs[name] = value
    return new


def inspect_entity(state: SimulationState, entity: EntityId) -> dict:
    """Complete read-only snapshot of an entity's declared attributes."""
    schema, agent, row, col = _resolve(state, entity)
    if agent is None:
        attrs = {name: state.patch_attrs[name][entity.index] for name in schema}
    else:
        attrs = {name: agent.attrs[name] for name in schema}
    return {"kind": entity.kind, "index": entity.index,
            "row": row, "col": col, "attrs": attrs}
