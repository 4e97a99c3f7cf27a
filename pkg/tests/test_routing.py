import random

import pytest

from tileslice.layout import LayoutState, parse_layout_ascii
from tileslice.routing import ReservationError, find_route, release_route, reserve_route

from oracles import bfs_route_length


def _state(text, qubits=0):
    layout = parse_layout_ascii(text)
    return LayoutState(layout, qubits)


def test_straight_corridor():
    state = _state("QrrrQ", qubits=2)
    route = find_route(state, (0, 0), (0, 4), (0, 2))
    assert route is not None
    assert route.tiles == ((0, 1), (0, 2), (0, 3))


def test_adjacent_patches_empty_route():
    state = _state("QQ", qubits=2)
    route = find_route(state, (0, 0), (0, 1), (0, 2))
    assert route.tiles == ()


def test_occupied_corridor_absent():
    state = _state("QrrrQ", qubits=2)
    first = find_route(state, (0, 0), (0, 4), (0, 2))
    reserve_route(state, first)
    assert find_route(state, (0, 0), (0, 4), (0, 2)) is None


def test_release_restores_route():
    state = _state("QrrrQ", qubits=2)
    first = find_route(state, (0, 0), (0, 4), (0, 2))
    reserve_route(state, first)
    release_route(state, first)
    assert find_route(state, (0, 0), (0, 4), (0, 2)) == first


def test_detour_around_reserved_route():
    # second interaction routes around the first one's corridor
    state = _state("QrrrQ\nrrrrr", qubits=2)
    first = find_route(state, (0, 0), (0, 4), (0, 2))
    assert len(first) == 3
    reserve_route(state, first)
    second = find_route(state, (0, 0), (0, 4), (0, 2))
    assert second is not None
    assert set(second.tiles).isdisjoint(set(first.tiles))
    assert len(second) == 5


def test_two_disjoint_reservations_in_one_window():
    state = _state("QrrrQ\nQrrrQ", qubits=4)
    top = find_route(state, (0, 0), (0, 4), (0, 2))
    bottom = find_route(state, (1, 0), (1, 4), (0, 2))
    reserve_route(state, top)
    reserve_route(state, bottom)
    assert set(top.tiles).isdisjoint(set(bottom.tiles))


def test_reservation_conflict_leaves_state_unchanged():
    state = _state("QrrrQ", qubits=2)
    route = find_route(state, (0, 0), (0, 4), (0, 2))
    reserve_route(state, route)
    with pytest.raises(ReservationError):
        reserve_route(state, route)
    release_route(state, route)
    assert find_route(state, (0, 0), (0, 4), (0, 2)) is not None


def test_routes_avoid_resource_and_dead_tiles():
    state = _state("QMX\nrrr\nrrQ", qubits=2)
    route = find_route(state, (0, 0), (2, 2), (0, 2))
    assert route is not None
    assert (0, 1) not in route.tiles
    assert (0, 2) not in route.tiles


def test_determinism():
    state = _state("QrrrQ\nrrrrr\nrrrrr", qubits=2)
    routes = {find_route(state, (0, 0), (0, 4), (0, 2)).tiles for _ in range(5)}
    assert len(routes) == 1


def _random_grid_case(rng):
    rows = rng.randint(2, 20)
    cols = rng.randint(2, 20)
    cells = [["r" if rng.random() > 0.35 else "X" for _ in range(cols)] for _ in range(rows)]
    spots = [(r, c) for r in range(rows) for c in range(cols)]
    src = rng.choice(spots)
    dst = rng.choice([s for s in spots if s != src])
    cells[src[0]][src[1]] = "Q"
    cells[dst[0]][dst[1]] = "Q"
    text = "\n".join("".join(row) for row in cells)
    return text, src, dst


def test_matches_bfs_oracle_on_random_grids():
    rng = random.Random(7)
    agreements = 0
    for _ in range(200):
        text, src, dst = _random_grid_case(rng)
        state = _state(text)
        route = find_route(state, src, dst, (0, 2))
        free = lambda c: state.is_routable_free(state.layout.index(c), 0)
        oracle = bfs_route_length(state.layout, free, src, dst)
        if route is None:
            assert oracle is None
        else:
            assert oracle == len(route)
        agreements += 1
    assert agreements == 200


def test_optimal_on_empty_grids():
    rng = random.Random(11)
    for _ in range(50):
        rows = rng.randint(2, 20)
        cols = rng.randint(2, 20)
        grid = [["r"] * cols for _ in range(rows)]
        spots = [(r, c) for r in range(rows) for c in range(cols)]
        src = rng.choice(spots)
        dst = rng.choice([s for s in spots if s != src])
        grid[src[0]][src[1]] = "Q"
        grid[dst[0]][dst[1]] = "Q"
        state = _state("\n".join("".join(row) for row in grid))
        route = find_route(state, src, dst, (0, 2))
        manhattan = abs(src[0] - dst[0]) + abs(src[1] - dst[1])
        assert route is not None
        assert len(route) == manhattan - 1
