"""Shortest free paths between patch tiles via A* on the tile grid.

A route is the ordered list of free routing/ancilla tiles strictly between
the two endpoint patches; the endpoints themselves are excluded. Route
tiles are occupied for a two-slice window. Searches are deterministic:
ties prefer the lower row, then the lower column.
"""

from __future__ import annotations

from dataclasses import dataclass
from heapq import heappush, heappop

from .layout import Coord, LayoutState

# Heap keys pack (f, tile_index) into one int; tile indices are row-major so
# index order is exactly the (row, col) tie-break.
_SHIFT = 32


@dataclass(frozen=True)
class Route:
    """Tiles from a neighbour of the source to a neighbour of the
    destination, plus the slice window they are reserved for."""

    tiles: tuple[Coord, ...]
    window: tuple[int, int]

    def __post_init__(self):
        seen = set()
        prev = None
        for tile in self.tiles:
            if tile in seen:
                raise ValueError("route revisits a tile")
            seen.add(tile)
            if prev is not None and abs(tile[0] - prev[0]) + abs(tile[1] - prev[1]) != 1:
                raise ValueError("route tiles must be orthogonally adjacent")
            prev = tile

    def __len__(self) -> int:
        return len(self.tiles)


class ReservationError(RuntimeError):
    pass


def find_route(state: LayoutState, src: Coord, dst: Coord,
               window: tuple[int, int]) -> Route | None:
    """Minimal-length free route between the patches on ``src`` and ``dst``.

    Returns None when no free path exists in the window. Adjacent patches
    yield an empty route.
    """
    layout = state.layout
    start_slice = window[0]
    src_idx = layout.index(src)
    dst_idx = layout.index(dst)
    dr, dc = dst

    if abs(src[0] - dr) + abs(src[1] - dc) == 1:
        return Route((), window)

    adjacency = layout.adjacency
    goal_set = set(adjacency[dst_idx])
    if not any(state.is_routable_free(i, start_slice) for i in goal_set):
        return None

    cols = layout.cols
    g_score: dict[int, int] = {}
    parent: dict[int, int] = {}
    heap: list[int] = []
    for n in adjacency[src_idx]:
        if state.is_routable_free(n, start_slice):
            g_score[n] = 1
            parent[n] = -1
            h = abs(n // cols - dr) + abs(n % cols - dc) - 1
            heappush(heap, ((1 + h) << _SHIFT) | n)

    while heap:
        item = heappop(heap)
        idx = item & ((1 << _SHIFT) - 1)
        f = item >> _SHIFT
        g = g_score[idx]
        h = abs(idx // cols - dr) + abs(idx % cols - dc) - 1
        if f > g + h:
            continue  # stale entry
        if idx in goal_set:
            tiles = []
            while idx != -1:
                tiles.append(layout.coord(idx))
                idx = parent[idx]
            return Route(tuple(reversed(tiles)), window)
        ng = g + 1
        for n in adjacency[idx]:
            if not state.is_routable_free(n, start_slice):
                continue
            if ng < g_score.get(n, 1 << 60):
                g_score[n] = ng
                parent[n] = idx
                nh = abs(n // cols - dr) + abs(n % cols - dc) - 1
                heappush(heap, ((ng + nh) << _SHIFT) | n)
    return None


def reserve_route(state: LayoutState, route: Route) -> None:
    """Occupy every route tile for the route's window, atomically."""
    start, end = route.window
    indices = [state.layout.index(t) for t in route.tiles]
    for idx in indices:
        if not state.is_routable_free(idx, start):
            raise ReservationError(
                f"tile {state.layout.coord(idx)} is not free at slice {start}"
            )
    state.claim(indices, end)


def release_route(state: LayoutState, route: Route) -> None:
    state.release([state.layout.index(t) for t in route.tiles], route.window[0])
