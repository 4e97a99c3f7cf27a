import pytest
from hypothesis import given, strategies as st

from tileslice.qasm import (
    Gate,
    GateKind,
    LogicalCircuit,
    QasmError,
    emit_program,
    parse_program,
)


def test_single_cnot():
    circuit = parse_program("qreg q[2]; cx q[0],q[1];")
    assert circuit.num_qubits == 2
    assert circuit.gates == (Gate(GateKind.CNOT, (0, 1)),)


def test_t_and_tdg():
    circuit = parse_program("qreg q[1]; t q[0]; tdg q[0];")
    assert circuit.num_qubits == 1
    assert [g.kind for g in circuit.gates] == [GateKind.T, GateKind.TDG]


def test_unsupported_gate_named_in_error():
    with pytest.raises(QasmError, match="ccx"):
        parse_program("qreg q[3]; ccx q[0],q[1],q[2];")


def test_headers_comments_and_barriers_ignored():
    src = """OPENQASM 2.0;
include "qelib1.inc";
// a comment
qreg q[2];
barrier q[0],q[1];
h q[0]; // trailing comment
cx q[0],q[1];
"""
    circuit = parse_program(src)
    assert [g.kind for g in circuit.gates] == [GateKind.H, GateKind.CNOT]


def test_all_ten_gates():
    src = "qreg q[2];" + "".join(
        f"{name} q[0];" for name in ["x", "y", "z", "s", "sdg", "t", "tdg", "h", "reset"]
    ) + "cx q[0],q[1];"
    circuit = parse_program(src)
    assert len(circuit.gates) == 10


def test_measure_and_creg_rejected():
    with pytest.raises(QasmError, match="creg"):
        parse_program("qreg q[1]; creg c[1];")
    with pytest.raises(QasmError, match="measure"):
        parse_program("qreg q[1]; measure q[0] -> c[0];")


def test_multiple_qreg_rejected():
    with pytest.raises(QasmError, match="multiple qreg"):
        parse_program("qreg q[1]; qreg r[1];")


def test_out_of_range_operand():
    with pytest.raises(QasmError, match=r"q\[2\]"):
        parse_program("qreg q[2]; t q[2];")


def test_cx_same_operand_rejected():
    with pytest.raises(QasmError, match="differ"):
        parse_program("qreg q[2]; cx q[1],q[1];")


def test_error_carries_position():
    try:
        parse_program("qreg q[1];\n\n  ccx q[0],q[0],q[0];")
    except QasmError as exc:
        assert exc.line == 3
        assert exc.col == 3
    else:
        pytest.fail("expected QasmError")


def test_gate_before_qreg_rejected():
    with pytest.raises(QasmError, match="before qreg"):
        parse_program("h q[0]; qreg q[1];")


_single = st.sampled_from([k for k in GateKind if k is not GateKind.CNOT])


@st.composite
def circuits(draw):
    n = draw(st.integers(min_value=1, max_value=8))
    gates = []
    for _ in range(draw(st.integers(min_value=0, max_value=25))):
        if n >= 2 and draw(st.booleans()):
            a = draw(st.integers(min_value=0, max_value=n - 1))
            b = draw(st.integers(min_value=0, max_value=n - 1).filter(lambda x: x != a))
            gates.append(Gate(GateKind.CNOT, (a, b)))
        else:
            kind = draw(_single)
            gates.append(Gate(kind, (draw(st.integers(min_value=0, max_value=n - 1)),)))
    return LogicalCircuit(n, tuple(gates))


@given(circuits())
def test_round_trip(circuit):
    assert parse_program(emit_program(circuit)) == circuit


def test_order_preserved():
    src = "qreg q[3];" + "".join(f"t q[{i % 3}];" for i in range(9))
    circuit = parse_program(src)
    assert [g.qubits[0] for g in circuit.gates] == [i % 3 for i in range(9)]
