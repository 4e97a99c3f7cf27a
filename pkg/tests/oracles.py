"""Independent oracles used by the test suite.

These deliberately avoid the library's own algorithms: routing is checked
against breadth-first search, factory counts against a cycle-by-cycle
production/consumption simulation, and depth against a direct recomputation.
"""

from __future__ import annotations

from collections import deque


def bfs_route_length(layout, free, src, dst):
    """Length (tile count) of a shortest free path strictly between src and
    dst, or None. ``free(coord)`` decides traversability; endpoints excluded.
    """
    rows, cols = layout.rows, layout.cols

    def neighbors(coord):
        r, c = coord
        for rr, cc in ((r - 1, c), (r, c - 1), (r, c + 1), (r + 1, c)):
            if 0 <= rr < rows and 0 <= cc < cols:
                yield (rr, cc)

    if abs(src[0] - dst[0]) + abs(src[1] - dst[1]) == 1:
        return 0
    goal = set(neighbors(dst))
    dist = {}
    queue = deque()
    for n in neighbors(src):
        if free(n):
            dist[n] = 1
            queue.append(n)
    while queue:
        cur = queue.popleft()
        if cur in goal:
            return dist[cur]
        for n in neighbors(cur):
            if free(n) and n not in dist:
                dist[n] = dist[cur] + 1
                queue.append(n)
    return None


def supply_ok(m_cum, factories, w_total):
    """Cycle simulation: consumption through cycle k must never exceed the
    constant production through cycle w_total + k - 1."""
    produced = 0
    cycles_run = 0
    for k, consumed in enumerate(m_cum, start=1):
        while cycles_run < w_total + k - 1:
            produced += factories
            cycles_run += 1
        if consumed > produced:
            return False
    return True


def simulate_reserve(outputs, m_cum):
    """Reserve at the start of each cycle k+1 given per-producing-cycle
    outputs (warm-ups first); production stops once total demand is met."""
    total = m_cum[-1] if len(m_cum) else 0
    produced = 0
    series = []
    w_total = len(outputs) - (len(m_cum) - 1) if len(m_cum) else len(outputs)
    for j in range(w_total):
        produced = min(produced + outputs[j], total)
    for k, consumed in enumerate(m_cum, start=1):
        idx = w_total + k - 1
        if idx < len(outputs):
            produced = min(produced + outputs[idx], total)
        series.append(produced - consumed)
    return series


def asap_depth(circuit):
    depth = [0] * circuit.num_qubits
    for gate in circuit.gates:
        d = max(depth[q] for q in gate.qubits) + 1
        for q in gate.qubits:
            depth[q] = d
    return max(depth, default=0)


def audit_program(program, dag):
    """Recompute per-slice tile claims from scratch and check exclusivity,
    DAG edge ordering, and local-instruction coverage. Costed successors must
    start at or after each predecessor's completion; zero-cost successors are
    absorbed no earlier than the predecessor's final active slice.
    Returns a list of violation strings (empty when clean)."""
    problems = []
    claims = [set() for _ in range(program.num_slices)]
    for node in program.nodes:
        if node.duration == 0:
            continue
        for s in range(node.start, node.start + node.duration):
            for tile in node.tiles:
                if tile in claims[s]:
                    problems.append(
                        f"slice {s}: tile {tile} double-claimed by {node.lli.kind.value}"
                    )
                claims[s].add(tile)

    placed = {node.node_index: node for node in program.nodes}
    if sorted(placed) != list(range(len(dag.nodes))):
        problems.append("not every DAG node appears exactly once")
    for b_idx, preds in enumerate(dag.preds):
        b = placed[b_idx]
        for a_idx in preds:
            a = placed[a_idx]
            if b.duration > 0:
                if b.start < a.finish:
                    problems.append(
                        f"edge {a_idx}->{b_idx}: start {b.start} < completion {a.finish}"
                    )
            elif b.start < a.last_active or b.finish < a.finish:
                problems.append(
                    f"edge {a_idx}->{b_idx}: zero-cost node absorbed too early"
                )

    for node in program.nodes:
        if node.lli.kind.value != "BellBasedCNOT":
            continue
        covered = set()
        for loc in node.locals:
            covered.add(loc.tile_a)
            covered.add(loc.tile_b)
            if loc.slice_index not in (node.start, node.start + 1):
                problems.append("local instruction outside its 2-slice window")
        if covered != set(node.tiles):
            problems.append(
                f"locals cover {sorted(covered)} but tiles are {sorted(node.tiles)}"
            )
    return problems
