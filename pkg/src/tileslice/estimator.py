"""Magic-state distillation planning and total-resource optimization.

Converts a compiled program's per-slice magic-state consumption profile
into factory counts, storage requirements, error rates and space/time
totals, then searches code distances (and optionally extra warm-up cycles)
for the cheapest configuration under a total error budget.

Three production strategies are supported: ``default`` runs the minimal
constant number of factories, ``add-warms`` additionally pre-fills the
storage bank during extra warm-up cycles, and ``min-storage`` switches
factories on and off so production tracks consumption.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.stats import binom

ACCEPT_THRESHOLD = 0.985
APPROACHES = ("default", "add-warms", "min-storage")
OBJECTIVES = ("space", "time", "space-time", "active_volume")


class EstimatorError(ValueError):
    pass


class InfeasibleDesignError(EstimatorError):
    """No copy count reaches the acceptance threshold for these distances."""


class InfeasibleEstimateError(EstimatorError):
    """No configuration in bounds meets the error budget."""

    def __init__(self, message: str, best: "ResourceEstimate | None"):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class DistillationUnitParams:
    """Footprint and duration of one 15:1 distillation unit at the full code
    distance, plus nothing else: every formula downstream is parametric in
    these. The defaults are implementation choices, not published values;
    override them via a unit-config file when calibrated numbers exist."""

    tiles: int = 12
    slices: int = 6

    def __post_init__(self):
        if self.tiles < 1 or self.slices < 1:
            raise EstimatorError("unit tiles and slices must be >= 1")

    @staticmethod
    def from_json(text: str) -> "DistillationUnitParams":
        raw = json.loads(text)
        return DistillationUnitParams(int(raw["tiles"]), int(raw["slices"]))


@dataclass(frozen=True)
class HardwareParams:
    """Physical infidelities: single-qubit, two-qubit, initialization."""

    p1: float
    p2: float
    pI: float
    name: str = "custom"

    @staticmethod
    def current() -> "HardwareParams":
        return HardwareParams(p1=4e-5, p2=3e-3, pI=3e-3, name="current")

    @staticmethod
    def projected() -> "HardwareParams":
        return HardwareParams(p1=4e-5, p2=6e-4, pI=1e-4, name="projected")

    @staticmethod
    def named(name: str) -> "HardwareParams":
        if name == "current":
            return HardwareParams.current()
        if name == "projected":
            return HardwareParams.projected()
        raise EstimatorError(f"unknown param_type {name!r}")


def surface_error_rate(distance: int, p: float) -> float:
    """Logical error rate of one surface-code patch per logical time-slice,
    0.1 * d * (p / 0.01) ** ((d + 1) / 2). Valid below the 0.01 threshold."""
    if p >= 0.01:
        raise EstimatorError(f"physical error rate {p} is at or above threshold 0.01")
    return 0.1 * distance * (p / 0.01) ** ((distance + 1) / 2)


def injected_error(hw: HardwareParams) -> float:
    """Error of an injected magic state entering level-1 distillation."""
    return (3.0 / 5.0) * hw.p2 + hw.pI + (2.0 / 3.0) * hw.p1


@dataclass(frozen=True)
class FactoryDesign:
    """A two-level 15:1 factory: level 1 runs ``copies`` unit copies at
    distance d1 feeding a single level-2 unit at the full distance d2."""

    d1: int
    d2: int
    copies: int
    unit: DistillationUnitParams
    level1_tiles: float  # one level-1 unit, in full-distance tiles
    level1_slices: float  # one level-1 run, in full-distance slices
    tiles: int  # n(D)
    cycle_slices: int  # tau(D)
    active_volume: float  # V(D)
    output_error: float  # P_T(D)
    accept_prob: float


def _unit_output_error(p_in: float, fail: float) -> float:
    return 35.0 * p_in ** 3 + fail


def _unit_accept_prob(p_in: float, fail: float) -> float:
    return (1.0 - p_in) ** 15 * max(0.0, 1.0 - fail)


def design_factory(d1: int, d2: int, unit: DistillationUnitParams,
                   hw: HardwareParams, accept_threshold: float = ACCEPT_THRESHOLD,
                   max_copies: int = 10000) -> FactoryDesign:
    """Size the two-level factory for distances (d1, d2).

    The level-1 copy count is the smallest one whose probability of at
    least 15 accepted outputs, times the level-2 acceptance probability,
    reaches the acceptance threshold.
    """
    if not (3 <= d1 <= d2) or d1 % 2 == 0 or d2 % 2 == 0:
        raise EstimatorError("need odd distances with 3 <= d1 <= d2")
    volume = unit.tiles * unit.slices  # native tile-slices of one unit run
    p_in1 = injected_error(hw)
    fail1 = volume * surface_error_rate(d1, hw.p2)
    out1 = _unit_output_error(p_in1, fail1)
    acc1 = _unit_accept_prob(p_in1, fail1)
    fail2 = volume * surface_error_rate(d2, hw.p2)
    out2 = _unit_output_error(out1, fail2)
    acc2 = _unit_accept_prob(out1, fail2)

    copies = None
    accept = 0.0
    if acc1 > 0.0 and acc2 > 0.0:
        for c in range(15, max_copies + 1):
            accept = float(binom.sf(14, c, acc1)) * acc2
            if accept >= accept_threshold:
                copies = c
                break
    if copies is None:
        raise InfeasibleDesignError(
            f"no copy count <= {max_copies} reaches acceptance {accept_threshold} "
            f"at d1={d1}, d2={d2}"
        )

    n1 = (2.0 * d1 * d1 - 1.0) / (2.0 * d2 * d2 - 1.0) * unit.tiles
    tau1 = d1 / d2 * unit.slices
    return FactoryDesign(
        d1=d1,
        d2=d2,
        copies=copies,
        unit=unit,
        level1_tiles=n1,
        level1_slices=tau1,
        tiles=math.ceil(max(copies * n1, unit.tiles)),
        cycle_slices=math.ceil(tau1 + unit.slices),
        active_volume=copies * n1 * tau1 + unit.tiles * unit.slices,
        output_error=out2,
        accept_prob=accept,
    )


# --------------------------------------------------------------------------
# Production planning
# --------------------------------------------------------------------------

def cumulative_profile(m_profile: Sequence[int], cycle_slices: int,
                       num_slices: int | None = None) -> np.ndarray:
    """Consumption coarse-grained by distillation cycle: entry k-1 holds the
    states consumed through cycle k. A final partial cycle counts whole."""
    if cycle_slices < 1:
        raise EstimatorError("cycle_slices must be >= 1")
    profile = np.asarray(m_profile, dtype=np.int64)
    span = len(profile) if num_slices is None else max(num_slices, len(profile))
    k_max = math.ceil(span / cycle_slices)
    if k_max == 0 or len(profile) == 0:
        return np.zeros(k_max, dtype=np.int64)
    cum = np.cumsum(profile)
    ends = np.minimum(np.arange(1, k_max + 1) * cycle_slices, len(profile))
    return np.where(ends > 0, cum[np.maximum(ends - 1, 0)], 0).astype(np.int64)


def count_factories(m_cum: Sequence[int], w_add: int = 0) -> tuple[int, int, int]:
    """Minimal constant per-cycle production (N, w, w_total) so that supply
    never trails demand: consumption through cycle k must not exceed
    production through cycle w_total + k - 1."""
    m = np.asarray(m_cum, dtype=np.int64)
    if len(m) == 0 or m[-1] == 0:
        return 0, 0, 0
    if len(m) == 1:
        n = int(m[0])
    else:
        # Exact integer ceiling per cycle; the max of ceilings equals the
        # ceiling of the max since ceil is nondecreasing.
        num = m[1:] - m[0]
        den = np.arange(1, len(m), dtype=np.int64) + w_add
        n = int(np.max((num + den - 1) // den))
        if n == 0 and m[0] > 0:
            n = 1  # constant cumulative demand: warm-ups absorb everything
    w = math.ceil(int(m[0]) / n)
    return n, w, w + w_add


def min_storage_schedule(m_cum: Sequence[int]) -> tuple[int, ...]:
    """Per-cycle factory counts that track consumption exactly: the single
    warm-up cycle produces the first cycle's demand and cycle k produces
    cycle k+1's demand. Entry 0 is the warm-up cycle."""
    m = np.asarray(m_cum, dtype=np.int64)
    if len(m) == 0 or m[-1] == 0:
        return ()
    return (int(m[0]),) + tuple(int(v) for v in np.diff(m))


@dataclass(frozen=True)
class StorageTrace:
    """Reserve sizes by cycle. ``reserve[k-1]`` is the bank at the start of
    cycle k+1; ``initial_bank`` is the bank when warm-ups end."""

    reserve: tuple[int, ...]
    initial_bank: int
    n_storage: int
    v_storage: float
    k_stop: int
    produced: tuple[int, ...]


def storage_trace(m_cum: Sequence[int], cycle_slices: int, *,
                  factories: int | None = None, w_total: int = 0,
                  schedule: Sequence[int] | None = None) -> StorageTrace:
    """Track the storage bank cycle by cycle.

    Either a constant ``factories`` count with ``w_total`` warm-up cycles,
    or an explicit per-producing-cycle ``schedule`` whose first entry is the
    single warm-up cycle. Production is capped at total demand.
    """
    m = np.asarray(m_cum, dtype=np.int64)
    k_max = len(m)
    total = int(m[-1]) if k_max else 0

    if schedule is not None:
        w_total = 1 if total else 0
        outputs = np.asarray(schedule, dtype=np.int64)
    else:
        if factories is None:
            raise EstimatorError("need either factories or schedule")
        run = w_total + (k_max - 1 if k_max else 0)
        outputs = np.full(run, factories, dtype=np.int64)
    produced = np.minimum(np.cumsum(outputs), total) if len(outputs) else np.zeros(0, np.int64)

    def produced_through(j: int) -> int:
        if j <= 0 or len(produced) == 0:
            return 0
        return int(produced[min(j, len(produced)) - 1])

    initial_bank = produced_through(w_total)
    reserve = np.array(
        [produced_through(w_total + k) - int(m[k - 1]) for k in range(1, k_max + 1)],
        dtype=np.int64,
    )
    if k_max and reserve.min() < 0:
        raise EstimatorError("production plan fails to meet demand")

    if schedule is not None:
        k_stop = max(k_max - 1, 0)
    else:
        k_stop = 0
        while k_stop < k_max and produced_through(w_total + k_stop) < total:
            k_stop += 1
    warm_bank = sum(produced_through(j) for j in range(1, w_total + 1))
    v_storage = float(int(reserve[: max(k_max - 1, 0)].sum()) + warm_bank) * cycle_slices
    n_storage = int(max([initial_bank, *reserve.tolist(), 0]))
    return StorageTrace(
        reserve=tuple(int(r) for r in reserve),
        initial_bank=initial_bank,
        n_storage=n_storage,
        v_storage=v_storage,
        k_stop=k_stop,
        produced=tuple(int(p) for p in produced),
    )


def layout_footprint(num_qubits: int) -> int:
    """Spatial contribution of the default compilation layout, in tiles."""
    if num_qubits < 1:
        return 0
    return (2 * math.ceil(math.sqrt(num_qubits)) + 3) ** 2


# --------------------------------------------------------------------------
# Whole-configuration evaluation
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ProfileInput:
    """The slice of compiled-program statistics the estimator consumes."""

    num_qubits: int
    num_slices: int
    active_volume: float
    m_profile: tuple[int, ...]

    @staticmethod
    def from_stats_dict(raw: dict) -> "ProfileInput":
        return ProfileInput(
            num_qubits=int(raw["num_qubits"]),
            num_slices=int(raw["num_slices"]),
            active_volume=float(raw["active_volume"]),
            m_profile=tuple(int(v) for v in raw["m_profile"]),
        )


@dataclass(frozen=True)
class ResourceEstimate:
    approach: str
    minimize_what: str
    error_budget: float
    d1: int
    d2: int
    factories: int | None
    factories_max: int
    schedule: tuple[int, ...] | None
    w: int
    w_add: int
    w_total: int
    k_max: int
    k_stop: int
    cycle_slices: int
    copies: int
    n_storage: int
    v_storage: float
    v_dist: float
    n_total: float
    tau_total: float
    v_total: float
    spacetime_proxy: float
    eps_logical: float
    eps_dist: float
    eps_storage: float
    eps_total: float
    output_error: float
    objective_value: float = field(default=float("nan"))
    reserve: tuple[int, ...] = ()
    m_cum: tuple[int, ...] = ()

    @property
    def nt_product(self) -> float:
        return self.n_total * self.tau_total

    def to_dict(self, with_trace: bool = False) -> dict:
        out = {
            "approach": self.approach,
            "minimize_what": self.minimize_what,
            "error_budget": self.error_budget,
            "d1": self.d1,
            "d2": self.d2,
            "factories": self.factories,
            "factories_max": self.factories_max,
            "w": self.w,
            "w_add": self.w_add,
            "w_total": self.w_total,
            "k_max": self.k_max,
            "k_stop": self.k_stop,
            "cycle_slices": self.cycle_slices,
            "level1_copies": self.copies,
            "n_storage": self.n_storage,
            "v_storage": self.v_storage,
            "v_dist": self.v_dist,
            "n_total": self.n_total,
            "tau_total": self.tau_total,
            "nt_product": self.nt_product,
            "v_total": self.v_total,
            "spacetime_proxy": self.spacetime_proxy,
            "eps_logical": self.eps_logical,
            "eps_dist": self.eps_dist,
            "eps_storage": self.eps_storage,
            "eps_total": self.eps_total,
            "distilled_state_error": self.output_error,
            "objective_value": self.objective_value,
        }
        if with_trace:
            out["schedule"] = list(self.schedule) if self.schedule is not None else None
            out["reserve"] = list(self.reserve)
            out["m_cum"] = list(self.m_cum)
        return out


def _objective(est_n: float, est_tau: float, est_v: float, d2: int,
               minimize_what: str) -> float:
    if minimize_what == "space":
        return est_n
    if minimize_what == "time":
        return est_tau
    if minimize_what == "space-time":
        return est_n * est_tau * d2 ** 3
    if minimize_what == "active_volume":
        return est_v
    raise EstimatorError(f"unknown objective {minimize_what!r}")


def evaluate(profile: ProfileInput, design: FactoryDesign, approach: str,
             w_add: int, hw: HardwareParams, *, minimize_what: str = "space-time",
             error_budget: float = math.nan) -> ResourceEstimate:
    """Cost one (design, approach, w_add) configuration end to end."""
    if approach not in APPROACHES:
        raise EstimatorError(f"unknown approach {approach!r}")
    m_cum = cumulative_profile(profile.m_profile, design.cycle_slices,
                               profile.num_slices)
    k_max = len(m_cum)
    total = int(m_cum[-1]) if k_max else 0

    schedule: tuple[int, ...] | None = None
    if approach == "min-storage":
        schedule = min_storage_schedule(m_cum)
        factories = None
        factories_max = max(schedule, default=0)
        w, w_total = (1, 1) if total else (0, 0)
        trace = storage_trace(m_cum, design.cycle_slices, schedule=schedule)
        v_dist = design.active_volume * float(sum(schedule))
    else:
        factories, w, w_total = count_factories(m_cum, w_add if approach == "add-warms" else 0)
        factories_max = factories
        trace = storage_trace(m_cum, design.cycle_slices,
                              factories=factories, w_total=w_total)
        v_dist = factories * design.active_volume * (w_total + trace.k_stop)

    n_total = factories_max * design.tiles + trace.n_storage \
        + layout_footprint(profile.num_qubits)
    tau_total = w_total * design.cycle_slices + profile.num_slices
    v_total = profile.active_volume + v_dist + trace.v_storage

    p_slice = surface_error_rate(design.d2, hw.p2)
    eps_logical = profile.active_volume * p_slice
    eps_storage = trace.v_storage * p_slice
    eps_dist = total * design.output_error
    eps_total = eps_logical + eps_dist + eps_storage

    return ResourceEstimate(
        approach=approach,
        minimize_what=minimize_what,
        error_budget=error_budget,
        d1=design.d1,
        d2=design.d2,
        factories=factories,
        factories_max=factories_max,
        schedule=schedule,
        w=w,
        w_add=w_add if approach == "add-warms" else 0,
        w_total=w_total,
        k_max=k_max,
        k_stop=trace.k_stop,
        cycle_slices=design.cycle_slices,
        copies=design.copies,
        n_storage=trace.n_storage,
        v_storage=trace.v_storage,
        v_dist=v_dist,
        n_total=n_total,
        tau_total=tau_total,
        v_total=v_total,
        spacetime_proxy=n_total * tau_total * design.d2 ** 3,
        eps_logical=eps_logical,
        eps_dist=eps_dist,
        eps_storage=eps_storage,
        eps_total=eps_total,
        output_error=design.output_error,
        objective_value=_objective(n_total, tau_total, v_total, design.d2,
                                   minimize_what),
        reserve=trace.reserve,
        m_cum=tuple(int(v) for v in m_cum),
    )


@dataclass(frozen=True)
class SearchBounds:
    min_d1: int = 3
    min_d2: int = 3
    max_d2: int = 51
    max_w: int = 0


def optimize(profile: ProfileInput, approach: str = "default",
             minimize_what: str = "space-time",
             bounds: SearchBounds = SearchBounds(),
             error_budget: float = 0.01,
             hw: HardwareParams | None = None,
             unit: DistillationUnitParams | None = None) -> ResourceEstimate:
    """Exhaustive grid search over odd (d1, d2) and, for add-warms, the
    extra warm-up count. Returns the feasible minimizer of the objective;
    ties break toward smaller d2, then d1, then w_add."""
    if minimize_what not in OBJECTIVES:
        raise EstimatorError(f"unknown objective {minimize_what!r}")
    if not 0.0 < error_budget < 1.0:
        raise EstimatorError("error_budget must lie in (0, 1)")
    hw = hw or HardwareParams.projected()
    unit = unit or DistillationUnitParams()

    w_adds: Sequence[int] = range(bounds.max_w + 1) if approach == "add-warms" else (0,)
    best: ResourceEstimate | None = None
    best_key: tuple | None = None
    closest: ResourceEstimate | None = None

    for d2 in range(bounds.min_d2 | 1, bounds.max_d2 + 1, 2):
        for d1 in range(bounds.min_d1 | 1, d2 + 1, 2):
            try:
                design = design_factory(d1, d2, unit, hw)
            except InfeasibleDesignError:
                continue
            for w_add in w_adds:
                est = evaluate(profile, design, approach, w_add, hw,
                               minimize_what=minimize_what,
                               error_budget=error_budget)
                if closest is None or est.eps_total < closest.eps_total:
                    closest = est
                if est.eps_total > error_budget:
                    continue
                key = (est.objective_value, d2, d1, w_add)
                if best_key is None or key < best_key:
                    best, best_key = est, key

    if best is None:
        detail = "no factory design was feasible in bounds" if closest is None else (
            f"best error rate found was {closest.eps_total:.3e} "
            f"(d1={closest.d1}, d2={closest.d2}) against budget {error_budget:g}"
        )
        raise InfeasibleEstimateError(
            f"no configuration meets the error budget: {detail}", closest
        )
    return best


def render_table(estimates: Sequence[ResourceEstimate]) -> str:
    """Human-readable rendering with the standard report columns."""
    headers = ["approach", "d1", "d2", "N", "w_total", "n_total", "tau_total",
               "n*tau", "V_total", "n*tau*d2^3", "eps_total"]
    rows = []
    for e in estimates:
        n_val = e.factories if e.factories is not None else e.factories_max
        rows.append([
            e.approach, str(e.d1), str(e.d2), str(n_val), str(e.w_total),
            f"{e.n_total:.3g}", f"{e.tau_total:.3g}", f"{e.nt_product:.3g}",
            f"{e.v_total:.3g}", f"{e.spacetime_proxy:.3g}", f"{e.eps_total:.3g}",
        ])
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
              for i, h in enumerate(headers)]
    def fmt(row):
        return "  ".join(v.rjust(w) for v, w in zip(row, widths))
    return "\n".join([fmt(headers)] + [fmt(r) for r in rows]) + "\n"


def trace_rows(estimate: ResourceEstimate) -> list[dict]:
    """Per-cycle reserve series for CSV export and plotting."""
    rows = []
    for k in range(1, estimate.k_max + 1):
        if estimate.schedule is not None:
            produced = estimate.schedule[k] if k < len(estimate.schedule) else 0
        else:
            produced = estimate.factories if k <= estimate.k_stop else 0
        rows.append({
            "cycle": k,
            "consumed_cumulative": estimate.m_cum[k - 1],
            "factories_on": produced,
            "reserve": estimate.reserve[k - 1],
        })
    return rows
