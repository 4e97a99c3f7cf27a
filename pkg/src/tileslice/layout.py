"""Tile grids: the ASCII layout format, the ``edpc`` generator family, and
the mutable per-compilation occupancy state.

Tile alphabet: 'Q' data qubit, 'A' ancilla, 'r' routing, 'M' reserved for
magic states, 'Y' pre-distilled Y state, 'X' dead, '0'-'9' distillation
(parsed for compatibility; never generated).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property

Coord = tuple[int, int]

_VALID_CHARS = set("QArMYX0123456789")
_ROUTABLE = set("Ar")


class TileKind(enum.Enum):
    DATA = "Q"
    ANCILLA = "A"
    ROUTING = "r"
    MAGIC = "M"
    Y_STATE = "Y"
    DEAD = "X"
    DISTILLATION = "D"  # any of '0'-'9' in the ASCII form

    @staticmethod
    def from_char(ch: str) -> "TileKind":
        if ch.isdigit():
            return TileKind.DISTILLATION
        return TileKind(ch)


class LayoutError(ValueError):
    pass


@dataclass(frozen=True)
class Layout:
    """Immutable rectangular tile grid plus the data-tile assignment."""

    rows: int
    cols: int
    cells: str  # row-major characters, len == rows * cols
    qubit_tiles: tuple[Coord, ...]  # qubit i lives on qubit_tiles[i]

    def __post_init__(self):
        if len(self.cells) != self.rows * self.cols:
            raise LayoutError("cell string does not match grid dimensions")

    def index(self, coord: Coord) -> int:
        return coord[0] * self.cols + coord[1]

    def coord(self, idx: int) -> Coord:
        return divmod(idx, self.cols)

    def char_at(self, coord: Coord) -> str:
        return self.cells[self.index(coord)]

    def kind_at(self, coord: Coord) -> TileKind:
        return TileKind.from_char(self.char_at(coord))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Orthogonal neighbours per tile, in (up, left, right, down) order."""
        out = []
        for r in range(self.rows):
            for c in range(self.cols):
                nbrs = []
                for rr, cc in ((r - 1, c), (r, c - 1), (r, c + 1), (r + 1, c)):
                    if 0 <= rr < self.rows and 0 <= cc < self.cols:
                        nbrs.append(rr * self.cols + cc)
                out.append(tuple(nbrs))
        return tuple(out)

    @cached_property
    def routable(self) -> tuple[bool, ...]:
        return tuple(ch in _ROUTABLE for ch in self.cells)

    def tiles_of(self, chars: str) -> list[int]:
        return [i for i, ch in enumerate(self.cells) if ch in chars]

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for ch in self.cells:
            out[ch] = out.get(ch, 0) + 1
        return out

    @property
    def num_tiles(self) -> int:
        return self.rows * self.cols

    @property
    def live_tiles(self) -> int:
        """Tiles that are not dead; the spatial footprint used for volume."""
        return self.num_tiles - self.cells.count("X")

    def validate_for_circuit(self, num_qubits: int) -> None:
        if num_qubits > len(self.qubit_tiles):
            raise LayoutError(
                f"layout provides {len(self.qubit_tiles)} data tiles, "
                f"circuit needs {num_qubits}"
            )
        for coord in self.qubit_tiles[:num_qubits]:
            idx = self.index(coord)
            if not any(self.cells[n] != "X" for n in self.adjacency[idx]):
                raise LayoutError(f"data tile {coord} has no live neighbour")

    def to_ascii(self) -> str:
        return "\n".join(
            self.cells[r * self.cols:(r + 1) * self.cols] for r in range(self.rows)
        )


def parse_layout_ascii(text: str) -> Layout:
    """Parse an ASCII grid; data tiles are numbered row-major."""
    lines = [ln for ln in text.splitlines() if ln.strip() != ""]
    if not lines:
        raise LayoutError("empty layout")
    width = len(lines[0])
    for r, ln in enumerate(lines):
        if len(ln) != width:
            raise LayoutError(f"ragged row {r}: length {len(ln)} != {width}")
        for c, ch in enumerate(ln):
            if ch not in _VALID_CHARS:
                raise LayoutError(f"unknown character {ch!r} at row {r}, col {c}")
    cells = "".join(lines)
    qubit_tiles = tuple(
        (i // width, i % width) for i, ch in enumerate(cells) if ch == "Q"
    )
    return Layout(len(lines), width, cells, qubit_tiles)


def emit_layout_ascii(layout: Layout) -> str:
    return layout.to_ascii() + "\n"


def _boundary_ring(grid: list[list[str]]) -> None:
    """Alternate M and Y tiles around the outer ring; corners stay routing."""
    rows, cols = len(grid), len(grid[0])
    ring: list[Coord] = []
    ring += [(0, c) for c in range(cols)]
    ring += [(r, cols - 1) for r in range(1, rows)]
    ring += [(rows - 1, c) for c in range(cols - 2, -1, -1)]
    ring += [(r, 0) for r in range(rows - 2, 0, -1)]
    corners = {(0, 0), (0, cols - 1), (rows - 1, 0), (rows - 1, cols - 1)}
    toggle = 0
    for coord in ring:
        if coord in corners:
            continue
        grid[coord[0]][coord[1]] = "M" if toggle == 0 else "Y"
        toggle ^= 1


def generate_edpc(num_qubits: int, num_lanes: int = 1, condensed: bool = False) -> Layout:
    """Generate an ``edpc`` layout for ``num_qubits`` logical qubits.

    Default settings give a square grid of (2*ceil(sqrt(L)) + 3)^2 tiles with
    data tiles on an interior lattice separated by single routing lanes and
    M/Y tiles alternating along the boundary. ``num_lanes`` widens every
    corridor; ``condensed`` packs data tiles into 2x2 blocks so each logical
    qubit keeps exactly two free edges (when L is divisible by 4).
    """
    if num_qubits < 1:
        raise LayoutError("need at least one logical qubit")
    if num_lanes < 1:
        raise LayoutError("num_lanes must be positive")
    k = num_lanes

    qubit_tiles: list[Coord] = []
    if condensed:
        blocks = math.ceil(num_qubits / 4)
        bcols = math.ceil(math.sqrt(blocks))
        brows = math.ceil(blocks / bcols)
        rows = 2 + 2 * k + 2 * brows + (brows - 1) * k
        cols = 2 + 2 * k + 2 * bcols + (bcols - 1) * k
        grid = [["r"] * cols for _ in range(rows)]
        for q in range(num_qubits):
            block, pos = divmod(q, 4)
            br, bc = divmod(block, bcols)
            r = 1 + k + br * (2 + k) + pos // 2
            c = 1 + k + bc * (2 + k) + pos % 2
            grid[r][c] = "Q"
            qubit_tiles.append((r, c))
    else:
        side_q = math.ceil(math.sqrt(num_qubits))
        size = (k + 1) * (side_q + 1) + 1
        grid = [["r"] * size for _ in range(size)]
        for q in range(num_qubits):
            i, j = divmod(q, side_q)
            r = 1 + k + i * (k + 1)
            c = 1 + k + j * (k + 1)
            grid[r][c] = "Q"
            qubit_tiles.append((r, c))

    _boundary_ring(grid)
    cells = "".join("".join(row) for row in grid)
    # Row-major numbering keeps the ASCII form a faithful round trip.
    return Layout(len(grid), len(grid[0]), cells, tuple(sorted(qubit_tiles)))


@dataclass(frozen=True)
class LayoutSummary:
    counts: dict[str, int]
    bulk_ancilla: int
    bulk_data: int

    @property
    def ancilla_to_data(self) -> tuple[int, int]:
        g = math.gcd(self.bulk_ancilla, self.bulk_data) or 1
        return (self.bulk_ancilla // g, self.bulk_data // g)

    @property
    def data_to_ancilla(self) -> tuple[int, int]:
        a, d = self.ancilla_to_data
        return (d, a)


def layout_summary(layout: Layout, corridor_width: int = 1) -> LayoutSummary:
    """Count tiles per kind and estimate the bulk routing:data ratio.

    The bulk is the bounding box of the data tiles extended up and left by
    ``corridor_width`` lanes, so that each data tile (or 2x2 block) owns one
    corridor's worth of routing space. Both ratio orientations are exposed
    on the summary since conventions differ.
    """
    counts = layout.counts()
    if counts.get("Q", 0) == 0:
        return LayoutSummary(counts, 0, 0)
    qrows = [r for r, _ in layout.qubit_tiles]
    qcols = [c for _, c in layout.qubit_tiles]
    r0 = max(0, min(qrows) - corridor_width)
    c0 = max(0, min(qcols) - corridor_width)
    r1, c1 = max(qrows), max(qcols)
    data = ancilla = 0
    for r in range(r0, r1 + 1):
        for c in range(c0, c1 + 1):
            if layout.char_at((r, c)) == "Q":
                data += 1
            else:
                ancilla += 1
    return LayoutSummary(counts, ancilla, data)


class ResourceStatus(enum.Enum):
    AVAILABLE = "available"
    BOUND = "bound"
    EMPTY = "empty"


@dataclass(frozen=True)
class Occupancy:
    """Introspection view of one tile at the state's current slice."""

    patch: int | None
    busy_until: int
    at_slice: int

    @property
    def free(self) -> bool:
        return self.patch is None and self.busy_until <= self.at_slice


class LayoutState:
    """Mutable occupancy over a Layout, owned by a single scheduler.

    Claims always start at the current slice or later, so one
    ``busy_until`` bound per tile captures occupancy exactly. Magic tiles
    follow the replenishment rule: each tile refreshes on slices congruent
    to its phase modulo ``disttime`` (phases are spread uniformly unless
    ``nostagger``). Y tiles are catalytic and re-arm when the sequence that
    bound them completes.
    """

    def __init__(self, layout: Layout, num_qubits: int,
                 disttime: int = 1, nostagger: bool = False):
        if disttime < 1:
            raise ValueError("disttime must be >= 1")
        layout.validate_for_circuit(num_qubits)
        self.layout = layout
        self.num_qubits = num_qubits
        self.disttime = disttime
        self.now = 0
        self.busy_until = [0] * layout.num_tiles
        self.patch_tile: dict[int, int] = {}
        self.tile_patch: dict[int, int] = {}
        for q in range(num_qubits):
            idx = layout.index(layout.qubit_tiles[q])
            self.patch_tile[q] = idx
            self.tile_patch[idx] = q

        self.magic_tiles = layout.tiles_of("M")
        self.y_tiles = layout.tiles_of("Y")
        self.resource_status: dict[int, ResourceStatus] = {
            i: ResourceStatus.AVAILABLE for i in self.magic_tiles + self.y_tiles
        }
        self.magic_phase = {
            idx: (0 if nostagger else j % disttime)
            for j, idx in enumerate(self.magic_tiles)
        }
        self._events: dict[int, list[tuple[str, int]]] = {}

    # -- occupancy ---------------------------------------------------------

    def is_routable_free(self, idx: int, at_slice: int) -> bool:
        return self.layout.routable[idx] and self.busy_until[idx] <= at_slice

    def free_neighbors(self, idx: int, at_slice: int) -> list[int]:
        return [n for n in self.layout.adjacency[idx]
                if self.is_routable_free(n, at_slice)]

    def claim(self, indices, until: int) -> None:
        for idx in indices:
            self.busy_until[idx] = max(self.busy_until[idx], until)

    def release(self, indices, start: int) -> None:
        for idx in indices:
            self.busy_until[idx] = min(self.busy_until[idx], start)

    def occupancy(self, coord: Coord) -> Occupancy:
        idx = self.layout.index(coord)
        return Occupancy(self.tile_patch.get(idx), self.busy_until[idx], self.now)

    # -- resource states ---------------------------------------------------

    def nearest_available(self, kind_char: str, anchor_idx: int) -> int | None:
        """Closest AVAILABLE 'M' or 'Y' tile to the anchor, by Manhattan
        distance with (row, col) tie-break."""
        pool = self.magic_tiles if kind_char == "M" else self.y_tiles
        ar, ac = self.layout.coord(anchor_idx)
        best: tuple[int, int, int] | None = None
        chosen = None
        for idx in pool:
            if self.resource_status[idx] is not ResourceStatus.AVAILABLE:
                continue
            r, c = self.layout.coord(idx)
            key = (abs(r - ar) + abs(c - ac), r, c)
            if best is None or key < best:
                best = key
                chosen = idx
        return chosen

    def bind_resource(self, idx: int, patch: int) -> None:
        if self.resource_status[idx] is not ResourceStatus.AVAILABLE:
            raise ValueError(f"tile {self.layout.coord(idx)} holds no resource state")
        self.resource_status[idx] = ResourceStatus.BOUND
        self.patch_tile[patch] = idx
        self.tile_patch[idx] = patch

    def schedule_magic_vacate(self, idx: int, at_slice: int) -> None:
        """The bound magic patch is measured out; tile empties at at_slice."""
        self._events.setdefault(at_slice, []).append(("vacate", idx))

    def schedule_y_release(self, idx: int, at_slice: int) -> None:
        """The catalytic sequence completes; the Y state is back at at_slice."""
        self._events.setdefault(at_slice, []).append(("rearm", idx))

    def _unbind(self, idx: int) -> None:
        patch = self.tile_patch.pop(idx, None)
        if patch is not None:
            self.patch_tile.pop(patch, None)

    def advance_to(self, target_slice: int) -> None:
        """Fire vacate/re-arm events and magic-tile refresh slots in order."""
        while self.now < target_slice:
            self.now += 1
            for action, idx in self._events.pop(self.now, ()):  # events first
                self._unbind(idx)
                if action == "vacate":
                    self.resource_status[idx] = ResourceStatus.EMPTY
                else:
                    self.resource_status[idx] = ResourceStatus.AVAILABLE
            for idx in self.magic_tiles:
                if (self.resource_status[idx] is ResourceStatus.EMPTY
                        and self.now % self.disttime == self.magic_phase[idx]):
                    self.resource_status[idx] = ResourceStatus.AVAILABLE

    def resource_active_tiles(self) -> frozenset[Coord]:
        """Tiles currently holding a live resource state (available or bound)."""
        return frozenset(
            self.layout.coord(idx)
            for idx, st in self.resource_status.items()
            if st is not ResourceStatus.EMPTY
        )
