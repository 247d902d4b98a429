from __future__ import annotations

import pytest

from parsim import kernel
from parsim.state import EntityId, SimulationState


def make_life(width=5, height=5, topology="bounded", seed=1, **extra) -> SimulationState:
    params = {"width": width, "height": height, "topology": topology,
              "initial": "all-dead"}
    params.update(extra)
    return kernel.init_simulation("game-of-life", params, seed)


def set_cells(state: SimulationState, cells: list[tuple[int, int]]) -> SimulationState:
    """Turn the given (row, col) cells alive, one pure edit at a time."""
    for row, col in cells:
        state = kernel.set_attribute(state, state.patch_id(row, col), "alive", True)
    return state


def alive_cells(state: SimulationState) -> set[tuple[int, int]]:
    return {divmod(i, state.width)
            for i, a in enumerate(state.patch_attrs["alive"]) if a}


BLINKER_V = [(1, 2), (2, 2), (3, 2)]  # vertical, centered on a 5x5 grid
BLINKER_H = [(2, 1), (2, 2), (2, 3)]


@pytest.fixture
def blinker() -> SimulationState:
    return set_cells(make_life(), BLINKER_V)


def life_oracle(cells: set[tuple[int, int]], width: int, height: int,
                torus: bool) -> set[tuple[int, int]]:
    """Independent brute-force next board: coordinate-set based, written
    against the raw B3/S23 rule and kept separate from the engine path."""
    nxt = set()
    for r in range(height):
        for c in range(width):
            n = 0
            for dr in (-1, 0, 1):
                for dc in (-1, 0, 1):
                    if (dr, dc) == (0, 0):
                        continue
                    rr, cc = r + dr, c + dc
                    if torus:
                        rr, cc = rr % height, cc % width
                    elif not (0 <= rr < height and 0 <= cc < width):
                        continue
                    if (rr, cc) in cells:
                        n += 1
            if n == 3 or ((r, c) in cells and n == 2):
                nxt.add((r, c))
    return nxt
