"""Directed agent-to-agent channels with next-tick message delivery.

A message sent during tick t sits in the recipient's pending queue and
becomes readable (inbox) only at tick t+1, when the step's delivery phase
runs. Loss is modeled per send: one Bernoulli draw from the simulation rng
per send event, whatever the outcome, so replays and reliability
comparisons stay draw-aligned.
"""

from __future__ import annotations

from .errors import ChannelError, RangeViolationError, UnknownEntityError
from .rng import SplitMix64
from .state import Channel, EntityId, Mailbox, Message, SimulationState


def add_channel(state: SimulationState, sender: EntityId, receiver: EntityId,
                reliability: float) -> SimulationState:
    if not 0.0 <= reliability <= 1.0:
        raise RangeViolationError(f"reliability {reliability} outside [0, 1]")
    for eid in (sender, receiver):
        if not state.find_agent(eid).alive:
            raise UnknownEntityError(f"agent {eid.key()} is not alive")
    new = state.clone()
    _add_channel(new, Channel(sender, receiver, reliability))
    return new


def _add_channel(state: SimulationState, channel: Channel) -> None:
    state.channels.append(channel)
    state.mailboxes.setdefault(channel.receiver.key(), Mailbox())


def _find_channel(state: SimulationState, sender: EntityId,
                  receiver: EntityId) -> Channel:
    for ch in state.channels:
        if ch.sender == sender and ch.receiver == receiver:
            return ch
    raise ChannelError(f"no channel {sender.key()} -> {receiver.key()}")


def _send(state: SimulationState, rng: SplitMix64, msg: Message) -> bool:
    """Mutating send used inside the step; returns True when delivered to
    the pending queue, False when the loss draw dropped it."""
    channel = _find_channel(state, msg.sender, msg.receiver)
    recipient = state.find_agent(msg.receiver)
    if not recipient.alive:
        raise UnknownEntityError(f"recipient {msg.receiver.key()} is not alive")
    delivered = rng.random() < channel.reliability
    if delivered:
        state.mailboxes.setdefault(msg.receiver.key(), Mailbox()).pending.append(msg)
    return delivered


def send(state: SimulationState, msg: Message) -> SimulationState:
    new = state.clone()
    rng = SplitMix64.from_state(new.rng)
    _send(new, rng, msg)
    new.rng = rng.state
    return new


def _broadcast(state: SimulationState, rng: SplitMix64, sender: EntityId,
               topic: str, payload: object) -> None:
    """Send over every outgoing channel of sender, in channel-creation
    order. Channels to dead recipients are skipped without a draw."""
    for ch in state.channels:
        if ch.sender != sender:
            continue
        recipient = state.find_agent(ch.receiver)
        if not recipient.alive:
            continue
        msg = Message(sender, ch.receiver, topic, payload, state.tick)
        _send(state, rng, msg)


def broadcast(state: SimulationState, sender: EntityId, topic: str,
              payload: object) -> SimulationState:
    if not state.find_agent(sender).alive:
        raise UnknownEntityError(f"sender {sender.key()} is not alive")
    new = state.clone()
    rng = SplitMix64.from_state(new.rng)
    _broadcast(new, rng, sender, topic, payload)
    new.rng = rng.state
    return new


def _deliver_pending(state: SimulationState) -> None:
    """Delivery phase: last tick's inboxes are discarded, pending messages
    become readable. Mailboxes are visited in sorted key order (delivery
    is draw-free, the order only fixes the serialized form)."""
    for key in sorted(state.mailboxes):
        mb = state.mailboxes[key]
        mb.inbox = mb.pending
        mb.pending = []


def deliver_pending(state: SimulationState) -> SimulationState:
    new = state.clone()
    _deliver_pending(new)
    return new


def read_inbox(state: SimulationState, agent: EntityId) -> list[Message]:
    if not state.find_agent(agent).alive:
        raise UnknownEntityError(f"agent {agent.key()} is not alive")
    mb = state.mailboxes.get(agent.key())
    return list(mb.inbox) if mb else []
