"""World state: entities, mailboxes, and the canonical byte-stable encoding.

A SimulationState is treated as an immutable value once it leaves the
stepping code: every public operation that "modifies" a state returns a
fresh copy.  The canonical serialization (sorted-key compact JSON) is the
unit of snapshotting, hashing, and all determinism checks, so two states
are equal exactly when their canonical bytes are equal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import kernels
from .errors import UnknownEntityError

PATCH_KIND = "patch"


@dataclass(frozen=True)
class EntityId:
    kind: str
    index: int

    def key(self) -> str:
        return f"{self.kind}#{self.index}"

    @classmethod
    def from_key(cls, key: str) -> "EntityId":
        kind, _, idx = key.rpartition("#")
        return cls(kind, int(idx))


@dataclass(frozen=True)
class Channel:
    sender: EntityId
    receiver: EntityId
    reliability: float

    def to_dict(self) -> dict:
        return {
            "from": self.sender.key(),
            "to": self.receiver.key(),
            "reliability": self.reliability,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Channel":
        return cls(EntityId.from_key(d["from"]), EntityId.from_key(d["to"]),
                   d["reliability"])


@dataclass(frozen=True)
class Message:
    sender: EntityId
    receiver: EntityId
    topic: str
    payload: object
    send_tick: int

    def to_dict(self) -> dict:
        return {
            "from": self.sender.key(),
            "to": self.receiver.key(),
            "topic": self.topic,
            "payload": self.payload,
            "send_tick": self.send_tick,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Message":
        return cls(EntityId.from_key(d["from"]), EntityId.from_key(d["to"]),
                   d["topic"], d["payload"], d["send_tick"])


@dataclass
class Mailbox:
    pending: list[Message] = field(default_factory=list)
    inbox: list[Message] = field(default_factory=list)

    def clone(self) -> "Mailbox":
        return Mailbox(list(self.pending), list(self.inbox))

    def to_dict(self) -> dict:
        return {
            "pending": [m.to_dict() for m in self.pending],
            "inbox": [m.to_dict() for m in self.inbox],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Mailbox":
        return cls([Message.from_dict(m) for m in d["pending"]],
                   [Message.from_dict(m) for m in d["inbox"]])


@dataclass
class Agent:
    kind: str
    index: int
    row: int
    col: int
    alive: bool
    attrs: dict[str, object]

    @property
    def entity_id(self) -> EntityId:
        return EntityId(self.kind, self.index)

    def clone(self) -> "Agent":
        return Agent(self.kind, self.index, self.row, self.col, self.alive,
                     dict(self.attrs))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "index": self.index,
            "row": self.row,
            "col": self.col,
            "alive": self.alive,
            "attrs": self.attrs,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Agent":
        return cls(d["kind"], d["index"], d["row"], d["col"], d["alive"],
                   dict(d["attrs"]))


@dataclass
class SimulationState:
    tick: int
    model: str
    params: dict[str, object]
    width: int
    height: int
    topology: str  # "bounded" | "torus"
    patch_attrs: dict[str, list]  # attr name -> flat row-major values
    agents: list[Agent]
    next_index: dict[str, int]  # per agent kind, next id to assign
    channels: list[Channel]  # creation order
    mailboxes: dict[str, Mailbox]  # agent key -> mailbox
    rng: int  # SplitMix64 state word
    probe_values: dict[str, float]

    # -- spatial helpers -------------------------------------------------

    def cell_index(self, row: int, col: int) -> int:
        return row * self.width + col

    def in_bounds(self, row: int, col: int) -> bool:
        return 0 <= row < self.height and 0 <= col < self.width

    def patch_id(self, row: int, col: int) -> EntityId:
        return EntityId(PATCH_KIND, self.cell_index(row, col))

    # -- entity lookup ---------------------------------------------------

    def find_agent(self, entity: EntityId) -> Agent:
        for agent in self.agents:
            if agent.kind == entity.kind and agent.index == entity.index:
                return agent
        raise UnknownEntityError(f"no agent {entity.key()}")

    def live_agents(self) -> list[Agent]:
        return [a for a in self.agents if a.alive]

    def agents_at(self, row: int, col: int, kind: str | None = None) -> list[Agent]:
        return [a for a in self.agents
                if a.alive and a.row == row and a.col == col
                and (kind is None or a.kind == kind)]

    # -- copying ---------------------------------------------------------

    def clone(self) -> "SimulationState":
        return SimulationState(
            tick=self.tick,
            model=self.model,
            params=dict(self.params),
            width=self.width,
            height=self.height,
            topology=self.topology,
            patch_attrs={k: list(v) for k, v in self.patch_attrs.items()},
            agents=[a.clone() for a in self.agents],
            next_index=dict(self.next_index),
            channels=list(self.channels),
            mailboxes={k: m.clone() for k, m in self.mailboxes.items()},
            rng=self.rng,
            probe_values=dict(self.probe_values),
        )

    # -- canonical encoding ----------------------------------------------

    def to_dict(self) -> dict:
        return {
            "tick": self.tick,
            "model": self.model,
            "params": self.params,
            "space": {
                "width": self.width,
                "height": self.height,
                "topology": self.topology,
            },
            "patches": self.patch_attrs,
            "agents": [a.to_dict() for a in self.agents],
            "next_index": self.next_index,
            "channels": [c.to_dict() for c in self.channels],
            "mailboxes": {k: m.to_dict() for k, m in sorted(self.mailboxes.items())},
            "rng": self.rng,
            "probes": self.probe_values,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SimulationState":
        return cls(
            tick=d["tick"],
            model=d["model"],
            params=dict(d["params"]),
            width=d["space"]["width"],
            height=d["space"]["height"],
            topology=d["space"]["topology"],
            patch_attrs={k: list(v) for k, v in d["patches"].items()},
            agents=[Agent.from_dict(a) for a in d["agents"]],
            next_index=dict(d["next_index"]),
            channels=[Channel.from_dict(c) for c in d["channels"]],
            mailboxes={k: Mailbox.from_dict(m) for k, m in d["mailboxes"].items()},
            rng=d["rng"],
            probe_values=dict(d["probes"]),
        )

    def to_canonical(self) -> bytes:
        """Byte-stable encoding: compact JSON, sorted keys, shortest
        round-trip float repr (Python's float formatting)."""
        return canonical_bytes(self.to_dict())

    @classmethod
    def from_canonical(cls, payload: bytes) -> "SimulationState":
        return cls.from_dict(json.loads(payload.decode("utf-8")))

    def state_hash(self) -> str:
        return fnv1a64(self.to_canonical())


def canonical_bytes(obj: object) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=False, allow_nan=True).encode("utf-8")


def fnv1a64(data: bytes) -> str:
    """FNV-1a, 64-bit variant; stable across platforms, hex-encoded."""
    return f"{kernels.fnv1a64_digest(data):016x}"
