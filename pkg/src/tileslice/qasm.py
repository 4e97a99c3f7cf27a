"""Frontend for the minimal OpenQASM 2.0 subset accepted by the compiler.

Supported statements: the version header, ``include`` lines, a single
``qreg`` declaration, ``barrier`` (ignored), and the ten-gate set
x, y, z, s, sdg, t, tdg, h, cx, reset. Everything else is rejected.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field


class GateKind(enum.Enum):
    X = "x"
    Y = "y"
    Z = "z"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    H = "h"
    CNOT = "cx"
    RESET = "reset"

    @property
    def arity(self) -> int:
        return 2 if self is GateKind.CNOT else 1


_NAME_TO_KIND = {kind.value: kind for kind in GateKind}


class QasmError(ValueError):
    """Parse failure, carrying the 1-based source position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: tuple[int, ...]

    def __post_init__(self):
        if len(self.qubits) != self.kind.arity:
            raise ValueError(f"{self.kind.value} expects {self.kind.arity} operand(s)")
        if self.kind is GateKind.CNOT and self.qubits[0] == self.qubits[1]:
            raise ValueError("cx control and target must differ")


@dataclass(frozen=True)
class LogicalCircuit:
    """An ordered Clifford+T gate list over ``num_qubits`` logical qubits."""

    num_qubits: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.num_qubits < 0:
            raise ValueError("negative qubit count")
        for gate in self.gates:
            for q in gate.qubits:
                if not 0 <= q < self.num_qubits:
                    raise ValueError(f"operand {q} outside register of size {self.num_qubits}")

    @property
    def t_count(self) -> int:
        return sum(1 for g in self.gates if g.kind in (GateKind.T, GateKind.TDG))

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for g in self.gates:
            out[g.kind.value] = out.get(g.kind.value, 0) + 1
        return out


_QREG_RE = re.compile(r"^qreg\s+([A-Za-z_][A-Za-z0-9_]*)\s*\[\s*(\d+)\s*\]$")
_ARG_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*\[\s*(\d+)\s*\]$")

# Gates we recognise as OpenQASM but deliberately do not support.
_KNOWN_UNSUPPORTED = {
    "ccx", "cz", "cy", "ch", "swap", "cswap", "u1", "u2", "u3", "u",
    "rx", "ry", "rz", "id", "sx", "sxdg", "p", "cp", "crz",
}


def _statements(text: str):
    """Yield (statement, line, col) with comments stripped; ';' terminates."""
    buf: list[str] = []
    start: tuple[int, int] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0]
        for colno, ch in enumerate(line, start=1):
            if ch == ";":
                stmt = "".join(buf).strip()
                if stmt:
                    yield stmt, start[0], start[1]
                buf = []
                start = None
            else:
                if start is None and not ch.isspace():
                    start = (lineno, colno)
                buf.append(ch)
    tail = "".join(buf).strip()
    if tail:
        yield tail, start[0], start[1]


def parse_program(text: str) -> LogicalCircuit:
    """Parse QASM source into a LogicalCircuit, preserving gate order."""
    reg_name: str | None = None
    reg_size = 0
    gates: list[Gate] = []

    for stmt, line, col in _statements(text):
        stmt = re.sub(r"\s+", " ", stmt)
        head = stmt.split(" ", 1)[0].lower()

        if head == "openqasm" or head == "include":
            continue
        if head == "barrier":
            continue
        if head == "creg" or head == "measure" or head == "if":
            raise QasmError(
                f"'{head}' is not supported: inputs must be unitary Clifford+T plus reset",
                line, col,
            )
        if head == "qreg":
            if reg_name is not None:
                raise QasmError("multiple qreg declarations", line, col)
            m = _QREG_RE.match(stmt)
            if not m:
                raise QasmError("malformed qreg declaration", line, col)
            reg_name = m.group(1)
            reg_size = int(m.group(2))
            continue

        kind = _NAME_TO_KIND.get(head)
        if kind is None:
            if head in _KNOWN_UNSUPPORTED:
                raise QasmError(f"unsupported gate '{head}'", line, col)
            raise QasmError(f"unknown statement '{head}'", line, col)

        if reg_name is None:
            raise QasmError("gate before qreg declaration", line, col)

        rest = stmt[len(head):].strip()
        args = [a.strip() for a in rest.split(",")] if rest else []
        if len(args) != kind.arity:
            raise QasmError(
                f"'{head}' expects {kind.arity} operand(s), got {len(args)}", line, col
            )
        qubits = []
        for arg in args:
            m = _ARG_RE.match(arg)
            if not m:
                raise QasmError(f"malformed operand '{arg}'", line, col)
            if m.group(1) != reg_name:
                raise QasmError(f"unknown register '{m.group(1)}'", line, col)
            idx = int(m.group(2))
            if idx >= reg_size:
                raise QasmError(
                    f"operand {reg_name}[{idx}] outside register of size {reg_size}", line, col
                )
            qubits.append(idx)
        if kind is GateKind.CNOT and qubits[0] == qubits[1]:
            raise QasmError("cx control and target must differ", line, col)
        gates.append(Gate(kind, tuple(qubits)))

    if reg_name is None:
        raise QasmError("no qreg declaration found", 1, 1)
    return LogicalCircuit(reg_size, tuple(gates))


def parse_file(path) -> LogicalCircuit:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_program(fh.read())


def emit_program(circuit: LogicalCircuit) -> str:
    """Render a circuit back to QASM; parse_program inverts this exactly."""
    lines = ['OPENQASM 2.0;', 'include "qelib1.inc";', f"qreg q[{circuit.num_qubits}];"]
    for gate in circuit.gates:
        args = ",".join(f"q[{q}]" for q in gate.qubits)
        lines.append(f"{gate.kind.value} {args};")
    return "\n".join(lines) + "\n"
