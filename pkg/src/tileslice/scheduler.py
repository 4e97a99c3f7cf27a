"""Stage 2: greedy wave scheduling of the LLI DAG onto a layout.

The pipeline keeps a wave of instructions whose dependencies are met,
repeatedly pops the head and tries to find the resources it needs on the
current slice (a free route, a free rotation companion, an available
resource state). Scheduled instructions enable their dependents within the
same slice; instructions that cannot be placed move to the next wave. When
the wave empties the slice counter advances, expired reservations lapse and
magic tiles refresh on their replenishment slots.

Zero-cost LLI (Paulis, Reset, HGate, the teleportation measurement) claim
no tiles and are absorbed into the final slice of their latest predecessor,
so they never change the slice total.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field

from .layout import Coord, Layout, LayoutState
from .lowering import DURATION, Lli, LliDag, LliKind, REQUEST_KINDS
from .routing import Route, find_route


class LocalKind(enum.Enum):
    TWO_PATCH_MEASURE = "TwoPatchMeasure"
    BELL_PREPARE = "BellPrepare"
    BELL_MEASURE = "BellMeasure"
    EXTEND_SPLIT = "ExtendSplit"
    MERGE_CONTRACT = "MergeContract"
    MOVE = "Move"


@dataclass(frozen=True)
class LocalInstruction:
    """One-slice lattice surgery operation on two adjacent tiles."""

    kind: LocalKind
    tile_a: Coord
    tile_b: Coord
    slice_index: int

    def __post_init__(self):
        dr = abs(self.tile_a[0] - self.tile_b[0])
        dc = abs(self.tile_a[1] - self.tile_b[1])
        if dr + dc != 1:
            raise ValueError("local instructions act on orthogonally adjacent tiles")


def compile_bell_cnot(control: Coord, target: Coord,
                      route_tiles: tuple[Coord, ...],
                      start_slice: int) -> list[LocalInstruction]:
    """Local-instruction expansion of a BellBasedCNOT over two slices.

    Slice one prepares Bell pairs on consecutive route tiles (an odd route
    extends the target patch onto the unpaired tile); slice two stitches
    pair boundaries with Bell measurements and joins each data patch to its
    adjacent route end. Adjacent patches fall back to two slices of direct
    joint measurement. The union of tiles touched equals the route plus
    both endpoints.
    """
    s0, s1 = start_slice, start_slice + 1
    k = len(route_tiles)
    if k == 0:
        return [
            LocalInstruction(LocalKind.TWO_PATCH_MEASURE, control, target, s0),
            LocalInstruction(LocalKind.TWO_PATCH_MEASURE, control, target, s1),
        ]
    out = [
        LocalInstruction(LocalKind.BELL_PREPARE, route_tiles[i], route_tiles[i + 1], s0)
        for i in range(0, k - 1, 2)
    ]
    if k % 2 == 1:
        out.append(LocalInstruction(LocalKind.EXTEND_SPLIT, route_tiles[-1], target, s0))
    out.append(LocalInstruction(LocalKind.TWO_PATCH_MEASURE, control, route_tiles[0], s1))
    out.extend(
        LocalInstruction(LocalKind.BELL_MEASURE, route_tiles[i], route_tiles[i + 1], s1)
        for i in range(1, k - 1, 2)
    )
    if k % 2 == 0:
        out.append(LocalInstruction(LocalKind.TWO_PATCH_MEASURE, route_tiles[-1], target, s1))
    return out


@dataclass(frozen=True)
class SchedulerOptions:
    disttime: int = 1
    nostagger: bool = False

    def __post_init__(self):
        if self.disttime < 1:
            raise ValueError("disttime must be >= 1")


@dataclass(frozen=True)
class ScheduledLli:
    """An LLI placed on the timeline.

    ``start`` is the slice the instruction appears on; costed instructions
    span ``[start, start + duration)`` and own ``tiles`` for that window.
    ``finish`` is the first slice at which dependents may begin.
    """

    lli: Lli
    start: int
    duration: int
    finish: int
    tiles: tuple[Coord, ...] = ()
    locals: tuple[LocalInstruction, ...] = ()
    node_index: int = -1  # position in the source DAG's node list

    @property
    def last_active(self) -> int:
        return self.start + self.duration - 1 if self.duration else self.start

    @property
    def span_end(self) -> int:
        return self.start + self.duration if self.duration else self.start + 1


@dataclass(frozen=True)
class SlicedProgram:
    """The compiled artifact: scheduled LLI plus per-slice resource info."""

    layout: Layout
    num_qubits: int
    options: SchedulerOptions
    nodes: tuple[ScheduledLli, ...]  # in scheduling order
    num_slices: int
    resource_active: tuple[frozenset[Coord], ...]  # per slice

    @property
    def data_tiles(self) -> tuple[Coord, ...]:
        return self.layout.qubit_tiles[: self.num_qubits]

    def nodes_by_start(self) -> list[list[ScheduledLli]]:
        rows: list[list[ScheduledLli]] = [[] for _ in range(self.num_slices)]
        for node in self.nodes:
            if self.num_slices:
                rows[min(node.start, self.num_slices - 1)].append(node)
        return rows


class DeadlockError(RuntimeError):
    def __init__(self, at_slice: int, stuck: list[Lli], remaining: int):
        names = ", ".join(f"{n.kind.value}{n.operands}" for n in stuck[:8])
        more = "" if len(stuck) <= 8 else f" (+{len(stuck) - 8} more)"
        super().__init__(
            f"no instruction schedulable by slice {at_slice}; "
            f"{remaining} left, stuck on: {names}{more}"
        )
        self.at_slice = at_slice
        self.stuck = stuck


_PASSIVE = {
    LliKind.RESET, LliKind.X_GATE, LliKind.Y_GATE, LliKind.Z_GATE,
    LliKind.H_GATE, LliKind.MEASURE,
}


class _Scheduler:
    def __init__(self, dag: LliDag, layout: Layout, opts: SchedulerOptions):
        self.dag = dag
        self.layout = layout
        self.opts = opts
        self.state = LayoutState(layout, dag.num_qubits,
                                 disttime=opts.disttime, nostagger=opts.nostagger)
        self.placed: list[ScheduledLli | None] = [None] * len(dag.nodes)
        # Catalytic bookkeeping: a Y tile stays locked until every LLI of the
        # gate that requested it has completed.
        self.group_left: dict[int, int] = {}
        self.group_tile: dict[int, int] = {}
        self.group_finish: dict[int, int] = {}
        for lli in dag.nodes:
            if lli.kind is LliKind.Y_REQUEST:
                self.group_left[lli.origin] = 0
        for lli in dag.nodes:
            if lli.origin in self.group_left:
                self.group_left[lli.origin] += 1

    # -- per-kind placement attempts ---------------------------------------

    def _earliest(self, idx: int) -> int:
        e = 0
        for p in self.dag.preds[idx]:
            f = self.placed[p].finish
            if f > e:
                e = f
        return e

    def _place_passive(self, idx: int) -> ScheduledLli:
        lli = self.dag.nodes[idx]
        start = 0
        finish = 0
        for p in self.dag.preds[idx]:
            prior = self.placed[p]
            if prior.last_active > start:
                start = prior.last_active
            if prior.finish > finish:
                finish = prior.finish
        finish = max(finish, start)
        placed = ScheduledLli(lli, start, 0, finish, node_index=idx)
        if lli.kind is LliKind.MEASURE:
            tile = self.state.patch_tile.get(lli.operands[0])
            if tile is not None and self.layout.cells[tile] == "M":
                self.state.schedule_magic_vacate(tile, start + 1)
        return placed

    def _place_request(self, idx: int, t: int) -> ScheduledLli | None:
        lli = self.dag.nodes[idx]
        kind_char = "M" if lli.kind is LliKind.MAGIC_REQUEST else "Y"
        anchor = self.state.patch_tile[lli.anchor]
        tile = self.state.nearest_available(kind_char, anchor)
        if tile is None:
            return None
        self.state.bind_resource(tile, lli.operands[0])
        if lli.kind is LliKind.Y_REQUEST:
            self.group_tile[lli.origin] = tile
        return ScheduledLli(lli, t, 0, t, tiles=(self.layout.coord(tile),),
                            node_index=idx)

    def _place_cnot(self, idx: int, t: int) -> ScheduledLli | None:
        lli = self.dag.nodes[idx]
        if t < self._earliest(idx):
            return None
        src = self.layout.coord(self.state.patch_tile[lli.operands[0]])
        dst = self.layout.coord(self.state.patch_tile[lli.operands[1]])
        route = find_route(self.state, src, dst, (t, t + 2))
        if route is None:
            return None
        locs = compile_bell_cnot(src, dst, route.tiles, t)
        tiles = (src,) + route.tiles + (dst,)
        self.state.claim([self.layout.index(c) for c in tiles], t + 2)
        return ScheduledLli(lli, t, 2, t + 2, tiles=tiles, locals=tuple(locs),
                            node_index=idx)

    def _place_rotate(self, idx: int, t: int) -> ScheduledLli | None:
        lli = self.dag.nodes[idx]
        if t < self._earliest(idx):
            return None
        home = self.state.patch_tile[lli.operands[0]]
        companion = None
        for n in self.layout.adjacency[home]:  # adjacency order is the tie-break
            if self.state.is_routable_free(n, t):
                companion = n
                break
        if companion is None:
            return None
        self.state.claim([home, companion], t + 3)
        tiles = (self.layout.coord(home), self.layout.coord(companion))
        return ScheduledLli(lli, t, 3, t + 3, tiles=tiles, node_index=idx)

    def _try(self, idx: int, t: int) -> ScheduledLli | None:
        kind = self.dag.nodes[idx].kind
        if kind in _PASSIVE:
            return self._place_passive(idx)
        if kind in REQUEST_KINDS:
            return self._place_request(idx, t)
        if kind is LliKind.BELL_CNOT:
            return self._place_cnot(idx, t)
        return self._place_rotate(idx, t)

    # -- main loop -----------------------------------------------------------

    def run(self) -> SlicedProgram:
        dag = self.dag
        wave: deque[int] = deque(dag.roots())
        pending = [len(p) for p in dag.preds]
        remaining = len(dag.nodes)
        order: list[int] = []
        active_record: list[frozenset[Coord]] = []
        horizon = max(self.opts.disttime, 4)
        t = 0
        idle = 0

        while remaining:
            nextwave: deque[int] = deque()
            progressed = False
            while wave:
                i = wave.popleft()
                placed = self._try(i, t)
                if placed is None:
                    nextwave.append(i)
                    continue
                self.placed[i] = placed
                order.append(i)
                remaining -= 1
                progressed = True
                self._note_group(dag.nodes[i], placed)
                for j in dag.succs[i]:
                    pending[j] -= 1
                    if pending[j] == 0:
                        wave.append(j)
            active_record.append(self.state.resource_active_tiles())
            if remaining:
                idle = 0 if progressed else idle + 1
                if idle >= horizon:
                    raise DeadlockError(t, [dag.nodes[i] for i in nextwave], remaining)
                t += 1
                self.state.advance_to(t)
                wave = nextwave

        num_slices = max((self.placed[i].span_end for i in order), default=0)
        while len(active_record) < num_slices:
            t += 1
            self.state.advance_to(t)
            active_record.append(self.state.resource_active_tiles())

        return SlicedProgram(
            layout=self.layout,
            num_qubits=dag.num_qubits,
            options=self.opts,
            nodes=tuple(self.placed[i] for i in order),
            num_slices=num_slices,
            resource_active=tuple(active_record[:num_slices]),
        )

    def _note_group(self, lli: Lli, placed: ScheduledLli) -> None:
        origin = lli.origin
        if origin not in self.group_left:
            return
        self.group_finish[origin] = max(self.group_finish.get(origin, 0), placed.finish)
        self.group_left[origin] -= 1
        if self.group_left[origin] == 0:
            self.state.schedule_y_release(self.group_tile[origin],
                                          self.group_finish[origin])


def schedule(dag: LliDag, layout: Layout,
             opts: SchedulerOptions | None = None) -> SlicedProgram:
    """Slice the LLI DAG onto the layout with the wave pipeline."""
    return _Scheduler(dag, layout, opts or SchedulerOptions()).run()
