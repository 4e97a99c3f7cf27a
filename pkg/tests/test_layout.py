import math

import pytest
from hypothesis import given, strategies as st

from tileslice.layout import (
    LayoutError,
    LayoutState,
    ResourceStatus,
    emit_layout_ascii,
    generate_edpc,
    layout_summary,
    parse_layout_ascii,
)


def test_parse_small_grid():
    layout = parse_layout_ascii("QrQ\nrrr\nQrQ")
    assert (layout.rows, layout.cols) == (3, 3)
    assert layout.counts() == {"Q": 4, "r": 5}
    assert layout.qubit_tiles == ((0, 0), (0, 2), (2, 0), (2, 2))


def test_unknown_character_positioned():
    with pytest.raises(LayoutError, match="row 1, col 1"):
        parse_layout_ascii("QrQ\nrZr\nQrQ")


def test_ragged_rows_rejected():
    with pytest.raises(LayoutError, match="ragged"):
        parse_layout_ascii("Qr\nrrr")


def test_distillation_digits_parse():
    layout = parse_layout_ascii("01r\nrrQ")
    assert layout.counts()["0"] == 1
    assert not layout.routable[0]


def test_parse_emit_round_trip():
    text = "QrQMY\nrrrrX\nQrQ01\n"
    layout = parse_layout_ascii(text)
    assert emit_layout_ascii(layout) == text


@given(st.integers(min_value=1, max_value=60))
def test_edpc_footprint_formula(n):
    layout = generate_edpc(n, 1, False)
    side = 2 * math.ceil(math.sqrt(n)) + 3
    assert layout.num_tiles == side * side
    assert layout.counts()["Q"] == n


@given(st.integers(min_value=1, max_value=40),
       st.integers(min_value=1, max_value=3),
       st.booleans())
def test_edpc_resource_tiles_reach_routing(n, lanes, condensed):
    layout = generate_edpc(n, lanes, condensed)
    for idx in layout.tiles_of("MY"):
        assert any(layout.cells[j] == "r" for j in layout.adjacency[idx])
    layout.validate_for_circuit(n)
    # round-trip through the ASCII format preserves everything
    again = parse_layout_ascii(emit_layout_ascii(layout))
    assert again.cells == layout.cells
    assert again.qubit_tiles == layout.qubit_tiles


def test_edpc_nine_matches_published_shape():
    layout = generate_edpc(9, 1, False)
    assert (layout.rows, layout.cols) == (9, 9)
    counts = layout.counts()
    assert counts["Q"] == 9
    assert counts["M"] + counts["Y"] == 28  # ring of 32 minus 4 corners
    assert abs(counts["M"] - counts["Y"]) <= 1


def test_bulk_ratios_match_published_variants():
    assert layout_summary(generate_edpc(9, 1, False)).ancilla_to_data == (3, 1)
    assert layout_summary(generate_edpc(9, 2, False), corridor_width=2).ancilla_to_data == (8, 1)
    assert layout_summary(generate_edpc(8, 1, True)).ancilla_to_data == (5, 4)
    assert layout_summary(generate_edpc(8, 1, True)).data_to_ancilla == (4, 5)


def test_more_lanes_means_more_routing_tiles():
    one = generate_edpc(9, 1, False).counts()
    two = generate_edpc(9, 2, False).counts()
    assert two["r"] > one["r"]


def test_condensed_blocks_are_two_by_two():
    layout = generate_edpc(8, 1, True)
    tiles = set(layout.qubit_tiles)
    corners = {(r, c) for r, c in tiles
               if {(r, c + 1), (r + 1, c), (r + 1, c + 1)} <= tiles}
    covered = set()
    for r, c in corners:
        covered |= {(r, c), (r, c + 1), (r + 1, c), (r + 1, c + 1)}
    assert covered == tiles
    assert len(corners) == 2


def test_summary_counts_sum_to_grid():
    layout = generate_edpc(13, 2, True)
    summary = layout_summary(layout)
    assert sum(summary.counts.values()) == layout.num_tiles


def test_validate_rejects_undersized_layout():
    layout = parse_layout_ascii("QrQ\nrrr")
    with pytest.raises(LayoutError, match="data tiles"):
        layout.validate_for_circuit(3)


def test_validate_rejects_walled_in_qubit():
    layout = parse_layout_ascii("XQX\nXXX")
    with pytest.raises(LayoutError, match="no live neighbour"):
        layout.validate_for_circuit(1)


def test_state_binds_qubits_and_tracks_resources():
    layout = generate_edpc(4)
    state = LayoutState(layout, num_qubits=4)
    assert len(state.patch_tile) == 4
    anchor = state.patch_tile[0]
    tile = state.nearest_available("M", anchor)
    assert layout.cells[tile] == "M"
    state.bind_resource(tile, 99)
    assert state.resource_status[tile] is ResourceStatus.BOUND
    assert state.nearest_available("M", anchor) != tile
    with pytest.raises(ValueError):
        state.bind_resource(tile, 100)


def test_magic_refresh_phase_schedule():
    layout = generate_edpc(4)
    # disttime 3, no stagger: every empty tile refreshes on slices = 0 mod 3
    state = LayoutState(layout, 4, disttime=3, nostagger=True)
    tile = state.magic_tiles[0]
    state.bind_resource(tile, 50)
    state.schedule_magic_vacate(tile, 4)
    state.advance_to(4)
    assert state.resource_status[tile] is ResourceStatus.EMPTY
    state.advance_to(5)
    assert state.resource_status[tile] is ResourceStatus.EMPTY
    state.advance_to(6)
    assert state.resource_status[tile] is ResourceStatus.AVAILABLE


def test_magic_refresh_staggered_phases():
    layout = generate_edpc(4)
    state = LayoutState(layout, 4, disttime=3, nostagger=False)
    phases = [state.magic_phase[t] for t in state.magic_tiles[:3]]
    assert phases == [0, 1, 2]
