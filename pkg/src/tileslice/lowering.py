"""Stage 1: translate logical gates into layout-independent lattice
instructions (LLI) acting on patch IDs, and build their dependency DAG.

Costs follow the instruction table: Reset and Paulis are free, H carries a
3-slice patch rotation on a 2-tile region, CNOT takes 2 slices through a
route, S uses the catalytic teleportation sequence (10 slices serialized)
and T is teleportation (2 slices) plus a full corrective S, which is always
emitted.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .qasm import GateKind, Gate, LogicalCircuit


class LliKind(enum.Enum):
    RESET = "Reset"
    X_GATE = "XGate"
    Y_GATE = "YGate"
    Z_GATE = "ZGate"
    H_GATE = "HGate"
    ROTATE = "RotateSingleCellPatch"
    BELL_CNOT = "BellBasedCNOT"
    MAGIC_REQUEST = "MagicStateRequest"
    Y_REQUEST = "YStateRequest"
    MEASURE = "SinglePatchMeasurement"


# Slice cost of each LLI kind once placed. Zero-cost kinds are absorbed
# into the final slice of their latest predecessor.
DURATION = {
    LliKind.RESET: 0,
    LliKind.X_GATE: 0,
    LliKind.Y_GATE: 0,
    LliKind.Z_GATE: 0,
    LliKind.H_GATE: 0,
    LliKind.ROTATE: 3,
    LliKind.BELL_CNOT: 2,
    LliKind.MAGIC_REQUEST: 0,
    LliKind.Y_REQUEST: 0,
    LliKind.MEASURE: 0,
}

REQUEST_KINDS = (LliKind.MAGIC_REQUEST, LliKind.Y_REQUEST)


@dataclass(frozen=True)
class Lli:
    """One logical lattice instruction on 1-2 patch IDs.

    ``origin`` is the index of the source gate; resource requests carry the
    data patch they will interact with as ``anchor`` so the scheduler can
    bind the nearest resource tile.
    """

    kind: LliKind
    operands: tuple[int, ...]
    origin: int
    anchor: int | None = None

    def __post_init__(self):
        if self.kind is LliKind.BELL_CNOT:
            if len(self.operands) != 2 or self.operands[0] == self.operands[1]:
                raise ValueError("BellBasedCNOT needs two distinct patch IDs")
        elif len(self.operands) != 1:
            raise ValueError(f"{self.kind.value} acts on exactly one patch")


class PatchIdAllocator:
    """Monotone patch-ID source, seeded past the circuit's data qubits."""

    def __init__(self, first_free: int):
        self.next_id = first_free

    def fresh(self) -> int:
        pid = self.next_id
        self.next_id += 1
        return pid


def _catalytic_s(qubit: int, origin: int, alloc: PatchIdAllocator) -> list[Lli]:
    """Catalytic S-gate sequence; the Y state is reproduced by the circuit
    so its tile re-arms once the sequence completes. Serializes to
    2 + 3 + 2 + 3 = 10 slices."""
    y = alloc.fresh()
    return [
        Lli(LliKind.Y_REQUEST, (y,), origin, anchor=qubit),
        Lli(LliKind.BELL_CNOT, (qubit, y), origin),
        Lli(LliKind.H_GATE, (qubit,), origin),
        Lli(LliKind.ROTATE, (qubit,), origin),
        Lli(LliKind.BELL_CNOT, (qubit, y), origin),
        Lli(LliKind.H_GATE, (qubit,), origin),
        Lli(LliKind.ROTATE, (qubit,), origin),
    ]


_PAULI = {GateKind.X: LliKind.X_GATE, GateKind.Y: LliKind.Y_GATE, GateKind.Z: LliKind.Z_GATE}


def lower_gate(gate: Gate, origin: int, alloc: PatchIdAllocator) -> list[Lli]:
    kind = gate.kind
    if kind is GateKind.RESET:
        return [Lli(LliKind.RESET, gate.qubits, origin)]
    if kind in _PAULI:
        return [Lli(_PAULI[kind], gate.qubits, origin)]
    if kind is GateKind.H:
        q = gate.qubits[0]
        return [Lli(LliKind.H_GATE, (q,), origin), Lli(LliKind.ROTATE, (q,), origin)]
    if kind is GateKind.CNOT:
        return [Lli(LliKind.BELL_CNOT, gate.qubits, origin)]
    if kind in (GateKind.S, GateKind.SDG):
        # S and S-dagger share the circuit up to a tracked Pauli correction.
        return _catalytic_s(gate.qubits[0], origin, alloc)
    if kind in (GateKind.T, GateKind.TDG):
        q = gate.qubits[0]
        m = alloc.fresh()
        seq = [
            Lli(LliKind.MAGIC_REQUEST, (m,), origin, anchor=q),
            Lli(LliKind.BELL_CNOT, (q, m), origin),
            Lli(LliKind.MEASURE, (m,), origin),
        ]
        # The corrective S is needed half the time at run time; space-time
        # for it is always allocated.
        seq.extend(_catalytic_s(q, origin, alloc))
        return seq
    raise ValueError(f"cannot lower gate kind {kind}")


@dataclass(frozen=True)
class LliDag:
    """LLI nodes in emission order with per-patch dependency chains."""

    num_qubits: int
    nodes: tuple[Lli, ...]
    preds: tuple[tuple[int, ...], ...]
    succs: tuple[tuple[int, ...], ...]

    def roots(self) -> list[int]:
        return [i for i, p in enumerate(self.preds) if not p]


def lower_circuit(circuit: LogicalCircuit, alloc: PatchIdAllocator | None = None) -> LliDag:
    """Lower every gate in program order and chain LLI that share a patch.

    Consecutive users of a patch get a direct edge; transitive edges are
    omitted. Restricted to any single patch the DAG is a total order
    matching emission order.
    """
    if alloc is None:
        alloc = PatchIdAllocator(circuit.num_qubits)
    nodes: list[Lli] = []
    for i, gate in enumerate(circuit.gates):
        nodes.extend(lower_gate(gate, i, alloc))

    last_user: dict[int, int] = {}
    preds: list[tuple[int, ...]] = []
    succs: list[list[int]] = [[] for _ in nodes]
    for i, lli in enumerate(nodes):
        ps = sorted({last_user[p] for p in lli.operands if p in last_user})
        preds.append(tuple(ps))
        for p in ps:
            succs[p].append(i)
        for p in lli.operands:
            last_user[p] = i
    return LliDag(circuit.num_qubits, tuple(nodes),
                  tuple(preds), tuple(tuple(s) for s in succs))


def format_lli(lli: Lli) -> str:
    return f"{lli.kind.value} {','.join(str(p) for p in lli.operands)}"


def emit_unsliced(dag: LliDag) -> str:
    """Flat pre-slicing LLI list, one instruction per line."""
    return "".join(format_lli(n) + "\n" for n in dag.nodes)
