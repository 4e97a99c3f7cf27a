"""Random-circuit generation and scaling experiments.

Circuits are grown gate by gate (uniform CNOT pairs, optionally mixed with
uniform-target T gates) until the as-soon-as-possible gate depth reaches the
target. The benchmark driver compiles sample grids across layout variants
and emits plot-ready CSV rows.
"""

from __future__ import annotations

import csv
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .layout import generate_edpc
from .lowering import lower_circuit
from .output import program_stats
from .qasm import Gate, GateKind, LogicalCircuit
from .scheduler import SchedulerOptions, schedule


@dataclass(frozen=True)
class RandSpec:
    num_qubits: int
    target_depth: int
    t_fraction: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.target_depth < 1:
            raise ValueError("target_depth must be >= 1")
        if not 0.0 <= self.t_fraction <= 1.0:
            raise ValueError("t_fraction must lie in [0, 1]")
        if self.num_qubits < 2 and self.t_fraction < 1.0:
            raise ValueError("CNOT circuits need at least two qubits")


def random_circuit(spec: RandSpec) -> LogicalCircuit:
    """Draw gates until the circuit's gate-level depth hits the target;
    generation stops with the first gate that reaches the cutoff."""
    rng = random.Random(spec.seed)
    depth = [0] * spec.num_qubits
    gates: list[Gate] = []
    while True:
        if spec.t_fraction > 0.0 and rng.random() < spec.t_fraction:
            q = rng.randrange(spec.num_qubits)
            gates.append(Gate(GateKind.T, (q,)))
            depth[q] += 1
            reached = depth[q]
        else:
            a, b = rng.sample(range(spec.num_qubits), 2)
            gates.append(Gate(GateKind.CNOT, (a, b)))
            d = max(depth[a], depth[b]) + 1
            depth[a] = depth[b] = d
            reached = d
        if reached >= spec.target_depth:
            return LogicalCircuit(spec.num_qubits, tuple(gates))


def circuit_depth(circuit: LogicalCircuit) -> int:
    """As-soon-as-possible gate depth."""
    depth = [0] * circuit.num_qubits
    for gate in circuit.gates:
        d = max(depth[q] for q in gate.qubits) + 1
        for q in gate.qubits:
            depth[q] = d
    return max(depth, default=0)


@dataclass(frozen=True)
class LayoutVariant:
    """A member of the ``edpc`` family: corridor width plus condensed flag.
    Parsed from tokens like "1", "2" or "1c"."""

    num_lanes: int
    condensed: bool

    @property
    def label(self) -> str:
        return f"{self.num_lanes}-lane{'-condensed' if self.condensed else ''}"

    @staticmethod
    def parse(token: str) -> "LayoutVariant":
        token = token.strip()
        condensed = token.endswith("c")
        digits = token[:-1] if condensed else token
        if not digits.isdigit() or int(digits) < 1:
            raise ValueError(f"bad layout variant {token!r}; expected e.g. '1', '2', '1c'")
        return LayoutVariant(int(digits), condensed)


CSV_COLUMNS = ["qubits", "depth", "t_fraction", "layout", "sample", "seed",
               "status", "gates", "slices", "total_volume", "active_volume",
               "compile_seconds"]


@dataclass
class BenchRow:
    qubits: int
    depth: int
    t_fraction: float
    layout: str
    sample: int
    seed: int
    status: str = "ok"
    gates: int = 0
    slices: int = 0
    total_volume: int = 0
    active_volume: int = 0
    compile_seconds: float = 0.0

    def as_list(self) -> list:
        return [getattr(self, c) for c in CSV_COLUMNS]


def _sample_seed(base: int, qubits: int, depth: int, sample: int, t_mil: int) -> int:
    s = base
    for part in (qubits, depth, sample, t_mil):
        s = (s * 1000003 + part) % (1 << 63)
    return s


def _run_one(task: tuple) -> BenchRow:
    qubits, depth, t_fraction, variant_token, sample, seed, disttime = task
    variant = LayoutVariant.parse(variant_token)
    row = BenchRow(qubits, depth, t_fraction, variant.label, sample, seed)
    try:
        circuit = random_circuit(RandSpec(qubits, depth, t_fraction, seed))
        layout = generate_edpc(qubits, variant.num_lanes, variant.condensed)
        start = time.perf_counter()
        program = schedule(lower_circuit(circuit), layout,
                           SchedulerOptions(disttime=disttime))
        row.compile_seconds = time.perf_counter() - start
        stats = program_stats(program)
        row.gates = len(circuit.gates)
        row.slices = stats.num_slices
        row.total_volume = stats.total_volume
        row.active_volume = stats.active_volume
    except Exception as exc:  # record the failure, keep the sweep going
        row.status = f"error: {type(exc).__name__}"
    return row


def run_scaling(qubit_counts, depths, t_fraction: float, samples: int,
                variants, base_seed: int = 0, disttime: int = 1,
                jobs: int = 1) -> list[BenchRow]:
    """Compile every (qubits, depth, variant, sample) grid point and return
    one row per compilation, sorted for reproducible output."""
    tasks = []
    t_mil = int(round(t_fraction * 1000))
    for qubits in qubit_counts:
        for depth in depths:
            for token in variants:
                LayoutVariant.parse(token)  # fail fast on bad tokens
                for sample in range(samples):
                    seed = _sample_seed(base_seed, qubits, depth, sample, t_mil)
                    tasks.append((qubits, depth, t_fraction, token, sample,
                                  seed, disttime))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_one, tasks))
    else:
        rows = [_run_one(t) for t in tasks]
    rows.sort(key=lambda r: (r.qubits, r.depth, r.layout, r.sample))
    return rows


def write_csv(rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow(row.as_list())
