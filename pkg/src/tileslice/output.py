"""Sliced-program text emission and compiled-program statistics.

The canonical sliced format has one line per slice: instructions active on
the slice, separated by "; ", each as ``Kind op[,op]``. A BellBasedCNOT
carries that slice's local instructions in brackets with the tile pair each
acts on. Multi-slice instructions appear on every line they span.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

from .lowering import LliKind, format_lli
from .scheduler import ScheduledLli, SlicedProgram


def _entry(node: ScheduledLli, slice_index: int) -> str:
    text = format_lli(node.lli)
    locs = [l for l in node.locals if l.slice_index == slice_index]
    if locs:
        inner = ", ".join(
            f"{l.kind.value} ({l.tile_a[0]},{l.tile_a[1]})-({l.tile_b[0]},{l.tile_b[1]})"
            for l in locs
        )
        text += f" [{inner}]"
    return text


def emit_sliced_lli(program: SlicedProgram) -> str:
    """Render the slice-by-slice listing; line k describes slice k."""
    if program.num_slices == 0:
        return ""
    lines: list[list[str]] = [[] for _ in range(program.num_slices)]
    for node in program.nodes:
        for s in range(node.start, node.span_end):
            lines[s].append(_entry(node, s))
    return "\n".join("; ".join(row) for row in lines) + "\n"


@dataclass(frozen=True)
class ProgramStats:
    """Statistics consumed by the resource estimator."""

    num_qubits: int
    num_slices: int
    total_volume: int
    active_volume: int
    m_profile: tuple[int, ...]
    t_count: int
    layout_rows: int
    layout_cols: int
    layout_tiles: int

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"

    @staticmethod
    def from_json(text: str) -> "ProgramStats":
        raw = json.loads(text)
        raw["m_profile"] = tuple(raw["m_profile"])
        return ProgramStats(**raw)


def active_volume(program: SlicedProgram) -> int:
    """Tile-slices in which tiles are live: bound to a data patch, busy with
    an operation, or holding a resource state."""
    total = 0
    data = set(program.data_tiles)
    per_slice: list[set] = [set() for _ in range(program.num_slices)]
    for node in program.nodes:
        if node.duration:
            for s in range(node.start, node.span_end):
                per_slice[s].update(node.tiles)
    for s in range(program.num_slices):
        active = per_slice[s] | data
        if s < len(program.resource_active):
            active |= program.resource_active[s]
        total += len(active)
    return total


def total_volume(program: SlicedProgram) -> int:
    return program.layout.live_tiles * program.num_slices


def magic_profile(program: SlicedProgram) -> tuple[int, ...]:
    """Per-slice count of magic states consumed (requests bound per slice)."""
    counts = [0] * program.num_slices
    for node in program.nodes:
        if node.lli.kind is LliKind.MAGIC_REQUEST:
            counts[node.start] += 1
    return tuple(counts)


def cumulative_consumption(m_profile, k: int, cycle_slices: int) -> int:
    """Magic states consumed through the first k distillation cycles, each
    cycle_slices slices long; k past the program end clamps to the total."""
    if k < 0 or cycle_slices < 1:
        raise ValueError("need k >= 0 and cycle_slices >= 1")
    return sum(m_profile[: k * cycle_slices])


def program_stats(program: SlicedProgram) -> ProgramStats:
    profile = magic_profile(program)
    return ProgramStats(
        num_qubits=program.num_qubits,
        num_slices=program.num_slices,
        total_volume=total_volume(program),
        active_volume=active_volume(program),
        m_profile=profile,
        t_count=sum(profile),
        layout_rows=program.layout.rows,
        layout_cols=program.layout.cols,
        layout_tiles=program.layout.num_tiles,
    )
