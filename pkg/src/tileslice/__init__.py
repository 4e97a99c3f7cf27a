"""Clifford+T to surface-code lattice surgery compiler with magic-state
resource estimation."""

from .qasm import Gate, GateKind, LogicalCircuit, QasmError, parse_program, emit_program
from .layout import (
    Layout,
    LayoutError,
    LayoutState,
    TileKind,
    generate_edpc,
    layout_summary,
    parse_layout_ascii,
    emit_layout_ascii,
)
from .lowering import Lli, LliDag, LliKind, PatchIdAllocator, lower_circuit, lower_gate
from .routing import Route, find_route, release_route, reserve_route
from .scheduler import (
    DeadlockError,
    LocalInstruction,
    LocalKind,
    ScheduledLli,
    SchedulerOptions,
    SlicedProgram,
    compile_bell_cnot,
    schedule,
)
from .output import (
    ProgramStats,
    active_volume,
    cumulative_consumption,
    emit_sliced_lli,
    magic_profile,
    program_stats,
    total_volume,
)
from .estimator import (
    DistillationUnitParams,
    FactoryDesign,
    HardwareParams,
    ProfileInput,
    ResourceEstimate,
    SearchBounds,
    count_factories,
    design_factory,
    injected_error,
    min_storage_schedule,
    optimize,
    storage_trace,
    surface_error_rate,
)
from .hardware import HardwareProfile, PhysicalCost, to_physical, trapped_ion_profile
from .bench import RandSpec, circuit_depth, random_circuit, run_scaling

__version__ = "0.1.0"
