from hypothesis import given, strategies as st

from tileslice.lowering import (
    LliKind,
    PatchIdAllocator,
    emit_unsliced,
    lower_circuit,
    lower_gate,
)
from tileslice.qasm import Gate, GateKind, LogicalCircuit, parse_program


def _kinds(lli_list):
    return [l.kind for l in lli_list]


def test_h_lowering():
    out = lower_gate(Gate(GateKind.H, (0,)), 0, PatchIdAllocator(1))
    assert _kinds(out) == [LliKind.H_GATE, LliKind.ROTATE]
    assert all(l.operands == (0,) for l in out)


def test_cnot_lowering():
    out = lower_gate(Gate(GateKind.CNOT, (0, 1)), 0, PatchIdAllocator(2))
    assert _kinds(out) == [LliKind.BELL_CNOT]
    assert out[0].operands == (0, 1)


def test_pauli_and_reset_lowering():
    for kind, want in [(GateKind.X, LliKind.X_GATE), (GateKind.Y, LliKind.Y_GATE),
                       (GateKind.Z, LliKind.Z_GATE), (GateKind.RESET, LliKind.RESET)]:
        out = lower_gate(Gate(kind, (0,)), 0, PatchIdAllocator(1))
        assert _kinds(out) == [want]


def test_s_lowering_is_catalytic_sequence():
    out = lower_gate(Gate(GateKind.S, (0,)), 0, PatchIdAllocator(1))
    assert _kinds(out) == [
        LliKind.Y_REQUEST, LliKind.BELL_CNOT, LliKind.H_GATE, LliKind.ROTATE,
        LliKind.BELL_CNOT, LliKind.H_GATE, LliKind.ROTATE,
    ]
    y = out[0].operands[0]
    assert y == 1  # fresh patch past the data register
    assert out[1].operands == (0, y)
    assert out[0].anchor == 0


def test_t_lowering_includes_corrective_s():
    out = lower_gate(Gate(GateKind.T, (0,)), 0, PatchIdAllocator(1))
    assert _kinds(out)[:3] == [LliKind.MAGIC_REQUEST, LliKind.BELL_CNOT, LliKind.MEASURE]
    assert _kinds(out)[3:] == [
        LliKind.Y_REQUEST, LliKind.BELL_CNOT, LliKind.H_GATE, LliKind.ROTATE,
        LliKind.BELL_CNOT, LliKind.H_GATE, LliKind.ROTATE,
    ]
    m = out[0].operands[0]
    y = out[3].operands[0]
    assert m != y
    assert out[1].operands == (0, m)
    assert out[2].operands == (m,)


def test_dagger_variants_lower_identically():
    a = lower_gate(Gate(GateKind.S, (0,)), 0, PatchIdAllocator(1))
    b = lower_gate(Gate(GateKind.SDG, (0,)), 0, PatchIdAllocator(1))
    assert _kinds(a) == _kinds(b)
    a = lower_gate(Gate(GateKind.T, (0,)), 0, PatchIdAllocator(1))
    b = lower_gate(Gate(GateKind.TDG, (0,)), 0, PatchIdAllocator(1))
    assert _kinds(a) == _kinds(b)


def test_allocator_never_reissues():
    alloc = PatchIdAllocator(5)
    seen = {alloc.fresh() for _ in range(100)}
    assert len(seen) == 100
    assert min(seen) == 5


def test_disjoint_cnots_have_no_edge():
    circuit = parse_program("qreg q[4]; cx q[0],q[1]; cx q[2],q[3];")
    dag = lower_circuit(circuit)
    assert dag.preds == ((), ())


def test_shared_patch_creates_edge():
    circuit = parse_program("qreg q[3]; cx q[0],q[1]; cx q[1],q[2];")
    dag = lower_circuit(circuit)
    assert dag.preds == ((), (0,))
    assert dag.succs[0] == (1,)


def test_double_h_is_chain_of_four():
    circuit = parse_program("qreg q[1]; h q[0]; h q[0];")
    dag = lower_circuit(circuit)
    assert len(dag.nodes) == 4
    assert dag.preds == ((), (0,), (1,), (2,))


def test_node_count_rules():
    cnots = LogicalCircuit(4, tuple(Gate(GateKind.CNOT, (i % 3, 3)) for i in range(6)))
    assert len(lower_circuit(cnots).nodes) == 6
    hs = LogicalCircuit(2, tuple(Gate(GateKind.H, (i % 2,)) for i in range(5)))
    assert len(lower_circuit(hs).nodes) == 10


@st.composite
def mixed_circuits(draw):
    n = draw(st.integers(min_value=2, max_value=6))
    gates = []
    for _ in range(draw(st.integers(min_value=1, max_value=15))):
        kind = draw(st.sampled_from(list(GateKind)))
        if kind is GateKind.CNOT:
            a = draw(st.integers(0, n - 1))
            b = draw(st.integers(0, n - 1).filter(lambda x: x != a))
            gates.append(Gate(kind, (a, b)))
        else:
            gates.append(Gate(kind, (draw(st.integers(0, n - 1)),)))
    return LogicalCircuit(n, tuple(gates))


@given(mixed_circuits())
def test_per_patch_chains_follow_emission_order(circuit):
    dag = lower_circuit(circuit)
    by_patch = {}
    for i, node in enumerate(dag.nodes):
        for p in node.operands:
            by_patch.setdefault(p, []).append(i)
    for nodes in by_patch.values():
        for earlier, later in zip(nodes, nodes[1:]):
            assert earlier in dag.preds[later]
    # requests always receive IDs never seen before
    seen = set()
    for node in dag.nodes:
        if node.kind in (LliKind.MAGIC_REQUEST, LliKind.Y_REQUEST):
            assert node.operands[0] not in seen
        seen.update(node.operands)


def test_unsliced_format():
    circuit = parse_program("qreg q[2]; cx q[0],q[1]; t q[1];")
    text = emit_unsliced(lower_circuit(circuit))
    lines = text.splitlines()
    assert lines[0] == "BellBasedCNOT 0,1"
    assert lines[1] == "MagicStateRequest 2"
    assert len(lines) == 11
