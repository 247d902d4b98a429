"""Grid topology, neighborhoods, agent placement, and raster layer import.

The raster carrier is the plain-text ASCII grid format (header keys ncols,
nrows, xllcorner, yllcorner, cellsize, optional NODATA_value, then
whitespace-separated cell values).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    RangeViolationError,
    RasterFormatError,
    UnknownAttributeError,
    UnknownEntityError,
)
from .state import SimulationState

BOUNDED = "bounded"
TORUS = "torus"

MOORE = "moore"
VON_NEUMANN = "von-neumann"


@dataclass(frozen=True)
class Grid:
    """Lattice geometry; patch payloads live in SimulationState."""

    width: int
    height: int
    topology: str = BOUNDED

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise RangeViolationError("grid dimensions must be >= 1")
        if self.topology not in (BOUNDED, TORUS):
            raise RangeViolationError(f"unknown topology {self.topology!r}")

    def index(self, row: int, col: int) -> int:
        return row * self.width + col

    def coords(self, index: int) -> tuple[int, int]:
        return divmod(index, self.width)

    def contains(self, row: int, col: int) -> bool:
        return 0 <= row < self.height and 0 <= col < self.width


@dataclass(frozen=True)
class Neighborhood:
    kind: str = MOORE
    radius: int = 1

    def __post_init__(self):
        if self.kind not in (MOORE, VON_NEUMANN):
            raise RangeViolationError(f"unknown neighborhood {self.kind!r}")
        if self.radius < 1:
            raise RangeViolationError("radius must be >= 1")


def neighbors(grid: Grid, cell: tuple[int, int],
              nb: Neighborhood = Neighborhood()) -> list[tuple[int, int]]:
    """Neighbor coordinates in row-major window order, center excluded.

    Bounded grids omit off-edge cells; torus grids wrap (on grids smaller
    than the window a wrapped cell can appear more than once, matching
    count-with-multiplicity cellular-automaton semantics).
    """
    row, col = cell
    if not grid.contains(row, col):
        raise RangeViolationError(f"cell {cell} outside {grid.height}x{grid.width} grid")
    r = nb.radius
    out = []
    for dr in range(-r, r + 1):
        for dc in range(-r, r + 1):
            if dr == 0 and dc == 0:
                continue
            if nb.kind == VON_NEUMANN and abs(dr) + abs(dc) > r:
                continue
            nr, nc = row + dr, col + dc
            if grid.topology == TORUS:
                out.append((nr % grid.height, nc % grid.width))
            elif grid.contains(nr, nc):
                out.append((nr, nc))
    return out


def state_grid(state: SimulationState) -> Grid:
    return Grid(state.width, state.height, state.topology)


def move_agent(state: SimulationState, entity, dest: tuple[int, int]) -> SimulationState:
    """Relocate a live agent; cells may hold any number of agents."""
    row, col = dest
    agent = state.find_agent(entity)
    if not agent.alive:
        raise UnknownEntityError(f"agent {entity.key()} is not alive")
    if not state.in_bounds(row, col):
        raise RangeViolationError(f"destination {dest} out of bounds")
    new = state.clone()
    moved = new.find_agent(entity)
    moved.row, moved.col = row, col
    return new


# -- ASCII raster layers -------------------------------------------------

_HEADER_KEYS = ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize")
DEFAULT_NODATA = -9999.0


@dataclass
class RasterLayer:
    name: str
    ncols: int
    nrows: int
    xllcorner: float
    yllcorner: float
    cellsize: float
    nodata: float
    values: list[list[float]]  # nrows rows of ncols values

    def is_nodata(self, row: int, col: int) -> bool:
        return self.values[row][col] == self.nodata


def import_ascii_grid(text: str, name: str = "layer") -> RasterLayer:
    tokens = text.split()
    header: dict[str, float] = {}
    pos = 0
    # Header lines are key/value pairs; keys are case-insensitive.
    while pos + 1 < len(tokens):
        key = tokens[pos].lower()
        if key not in _HEADER_KEYS and key != "nodata_value":
            break
        if key in header:
            raise RasterFormatError(f"duplicate header key {key!r}")
        try:
            header[key] = float(tokens[pos + 1])
        except ValueError:
            raise RasterFormatError(
                f"non-numeric value {tokens[pos + 1]!r} for header key {key!r}")
        pos += 2
    missing = [k for k in _HEADER_KEYS if k not in header]
    if missing:
        raise RasterFormatError(f"missing header keys: {', '.join(missing)}")
    ncols, nrows = int(header["ncols"]), int(header["nrows"])
    if ncols < 1 or nrows < 1:
        raise RasterFormatError("ncols and nrows must be positive")
    if header["cellsize"] <= 0:
        raise RasterFormatError("cellsize must be positive")
    body = tokens[pos:]
    if len(body) != ncols * nrows:
        raise RasterFormatError(
            f"expected {ncols * nrows} values, found {len(body)}")
    try:
        flat = [float(t) for t in body]
    except ValueError as exc:
        raise RasterFormatError(f"non-numeric cell value: {exc}")
    values = [flat[r * ncols:(r + 1) * ncols] for r in range(nrows)]
    return RasterLayer(
        name=name,
        ncols=ncols,
        nrows=nrows,
        xllcorner=header["xllcorner"],
        yllcorner=header["yllcorner"],
        cellsize=header["cellsize"],
        nodata=header.get("nodata_value", DEFAULT_NODATA),
        values=values,
    )


def _fmt(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def export_ascii_grid(layer: RasterLayer) -> str:
    """Canonical header order, one raster row per line; values formatted
    round-trip exact so import(export(x)) == x."""
    lines = [
        f"ncols {layer.ncols}",
        f"nrows {layer.nrows}",
        f"xllcorner {_fmt(layer.xllcorner)}",
        f"yllcorner {_fmt(layer.yllcorner)}",
        f"cellsize {_fmt(layer.cellsize)}",
        f"NODATA_value {_fmt(layer.nodata)}",
    ]
    for row in layer.values:
        lines.append(" ".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def apply_layer(state: SimulationState, layer: RasterLayer, attr: str,
                scale: float = 1.0, offset: float = 0.0,
                clamp: tuple[float, float] | None = None) -> SimulationState:
    """Bind a raster layer to a real-valued patch attribute.

    Each non-nodata cell gets clamp(scale * value + offset); nodata cells
    keep whatever the model initialized them to.
    """
    if layer.ncols != state.width or layer.nrows != state.height:
        raise RasterFormatError(
            f"layer is {layer.nrows}x{layer.ncols}, "
            f"grid is {state.height}x{state.width}")
    if attr not in state.patch_attrs:
        raise UnknownAttributeError(f"no patch attribute {attr!r}")
    new = state.clone()
    col_values = new.patch_attrs[attr]
    for r in range(layer.nrows):
        for c in range(layer.ncols):
            if layer.is_nodata(r, c):
                continue
            v = scale * layer.values[r][c] + offset
            if clamp is not None:
                v = max(clamp[0], min(clamp[1], v))
            col_values[r * layer.ncols + c] = v
    return new
