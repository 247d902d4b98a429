"""Snapshot timeline: rewind to any recorded tick, edit, resume.

Every tick is stored as a full canonical payload, so rewind is O(1) and
replay verification is a pure hash comparison. Editing a rewound state
discards the previously recorded future (truncate-on-edit); the branch
counter keeps an audit trail of how often that happened.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

from . import kernel
from .errors import TimelineError
from .state import SimulationState, fnv1a64


@dataclass(frozen=True)
class Snapshot:
    tick: int
    payload: bytes
    hash: str

    @classmethod
    def of(cls, state: SimulationState) -> "Snapshot":
        payload = state.to_canonical()
        return cls(state.tick, payload, fnv1a64(payload))

    def restore(self) -> SimulationState:
        return SimulationState.from_canonical(self.payload)


@dataclass
class Timeline:
    snapshots: list[Snapshot] = field(default_factory=list)
    current: int = 0
    branch_count: int = 0

    @property
    def max_tick(self) -> int:
        if not self.snapshots:
            raise TimelineError("timeline is empty")
        return self.snapshots[-1].tick

    def record(self, state: SimulationState) -> None:
        """Append the next contiguous tick and move the cursor to it."""
        expected = 0 if not self.snapshots else self.max_tick + 1
        if state.tick != expected:
            raise TimelineError(
                f"cannot record tick {state.tick}: expected {expected}")
        self.snapshots.append(Snapshot.of(state))
        self.current = state.tick

    def rewind(self, tick: int) -> SimulationState:
        """Move the cursor to a past tick and return its state. Later
        snapshots are kept until an edit or a divergent step occurs."""
        if not self.snapshots or not 0 <= tick <= self.max_tick:
            raise TimelineError(f"tick {tick} not on timeline")
        self.current = tick
        return self.snapshots[tick].restore()

    def resume(self, edited: SimulationState | None = None) -> None:
        """Prepare to continue from the cursor. An edited state that
        differs (by hash) from the stored snapshot replaces it and
        truncates everything after it."""
        if edited is None:
            return
        if edited.tick != self.current:
            raise TimelineError(
                f"edited state is at tick {edited.tick}, cursor at {self.current}")
        snap = Snapshot.of(edited)
        if snap.hash == self.snapshots[self.current].hash:
            return
        del self.snapshots[self.current:]
        self.snapshots.append(snap)
        self.branch_count += 1

    def advance(self, state: SimulationState) -> None:
        """Store the result of stepping from the cursor. Re-stepping over
        a retained future overwrites in place (identical bytes when the
        resume was unedited); stepping past the end appends."""
        if state.tick != self.current + 1:
            raise TimelineError(
                f"advance to tick {state.tick} from cursor {self.current}")
        snap = Snapshot.of(state)
        if state.tick <= self.max_tick:
            self.snapshots[state.tick] = snap
        else:
            self.snapshots.append(snap)
        self.current = state.tick

    def state_at(self, tick: int) -> SimulationState:
        if not self.snapshots or not 0 <= tick <= self.max_tick:
            raise TimelineError(f"tick {tick} not on timeline")
        return self.snapshots[tick].restore()

    def verify_replay(self, t1: int, t2: int) -> bool:
        """Re-simulate from snapshot t1 and check every stored hash
        through t2."""
        if not 0 <= t1 < t2 <= self.max_tick:
            raise TimelineError(f"invalid replay window [{t1}, {t2}]")
        state = self.snapshots[t1].restore()
        for tick in range(t1 + 1, t2 + 1):
            state = kernel.step(state)
            if Snapshot.of(state).hash != self.snapshots[tick].hash:
                return False
        return True


def record_run(state: SimulationState, ticks: int) -> Timeline:
    """Convenience: run `ticks` steps from a tick-0 state, recording all."""
    timeline = Timeline()
    timeline.record(state)
    for _ in range(ticks):
        state = kernel.step(state)
        timeline.record(state)
    return timeline


def export_timeline(timeline: Timeline, directory: str | Path) -> None:
    """Offline audit dump: one canonical payload per tick plus an index of
    (tick, hash)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["tick", "hash"])
    for snap in timeline.snapshots:
        (directory / f"snapshot_{snap.tick:06d}.json").write_bytes(snap.payload)
        writer.writerow([snap.tick, snap.hash])
    (directory / "index.csv").write_text(buf.getvalue())


def import_timeline(directory: str | Path) -> Timeline:
    directory = Path(directory)
    timeline = Timeline()
    with open(directory / "index.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    for row in rows:
        payload = (directory / f"snapshot_{int(row['tick']):06d}.json").read_bytes()
        snap = Snapshot(int(row["tick"]), payload, fnv1a64(payload))
        if snap.hash != row["hash"]:
            raise TimelineError(f"snapshot {row['tick']} does not match its index hash")
        timeline.snapshots.append(snap)
    if timeline.snapshots:
        timeline.current = timeline.max_tick
    return timeline
