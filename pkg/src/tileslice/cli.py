"""Command line driver.

Subcommands: ``compile`` (QASM to sliced lattice instructions plus stats),
``estimate`` (stats to optimized resource totals), ``physical`` (totals to
seconds and square meters), ``bench`` (random-circuit scaling sweeps) and
``pipeline`` (compile, estimate and convert in one invocation).

Exit codes: 0 success, 1 usage or configuration, 2 input parse error,
3 scheduling deadlock, 4 estimator infeasibility.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import estimator as est
from .bench import run_scaling, write_csv
from .hardware import HardwareProfile, HardwareProfileError, to_physical, trapped_ion_profile
from .layout import LayoutError, generate_edpc, parse_layout_ascii
from .lowering import emit_unsliced, lower_circuit
from .output import emit_sliced_lli, program_stats
from .qasm import QasmError, parse_file
from .scheduler import DeadlockError, SchedulerOptions, schedule

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_DEADLOCK = 3
EXIT_INFEASIBLE = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _str_list(text: str) -> list[str]:
    return [tok.strip() for tok in text.split(",") if tok.strip()]


def _add_compile_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", help="QASM source file")
    layout = p.add_mutually_exclusive_group()
    layout.add_argument("-L", "--layout", choices=["edpc"], default="edpc",
                        help="generated layout family (default: edpc)")
    layout.add_argument("--layout-file", help="ASCII layout file")
    p.add_argument("--num-lanes", type=int, default=1,
                   help="routing lanes between data tiles (edpc)")
    p.add_argument("--condensed", action="store_true",
                   help="pack data tiles into 2x2 blocks (edpc)")
    p.add_argument("-P", "--pipeline", choices=["wave"], default="wave",
                   help="compilation pipeline (only 'wave' is implemented)")
    p.add_argument("--disttime", type=int, default=1,
                   help="slices between magic-state replenishments (default 1)")
    p.add_argument("--nostagger", action="store_true",
                   help="synchronize magic-tile replenishment slots")


def _build_parser() -> _Parser:
    parser = _Parser(prog="tileslice",
                     description="Surface-code lattice-surgery compiler and "
                                 "resource estimator")
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("compile", help="compile QASM to sliced instructions")
    _add_compile_options(pc)
    pc.add_argument("--printlli", choices=["sliced", "unsliced"],
                    help="write the instruction listing")
    pc.add_argument("--out", help="listing output path (default: stdout)")
    pc.add_argument("--stats-json", help="write program statistics as JSON")

    pe = sub.add_parser("estimate", help="optimize resource totals for a profile")
    pe.add_argument("--profile", required=True, help="stats JSON from 'compile'")
    _add_estimate_options(pe)

    pp = sub.add_parser("physical", help="convert an estimate to seconds and area")
    pp.add_argument("--estimate", required=True, help="estimate JSON")
    pp.add_argument("--hardware", help="hardware profile JSON (default: trapped ion)")

    pb = sub.add_parser("bench", help="random-circuit scaling sweep")
    pb.add_argument("--qubits", type=_int_list, required=True)
    pb.add_argument("--depth", type=_int_list, required=True)
    pb.add_argument("--t-fraction", type=float, default=0.0)
    pb.add_argument("--samples", type=int, default=10)
    pb.add_argument("--layout-variants", type=_str_list, default=["1"],
                    help="comma list like '1,2,1c'")
    pb.add_argument("--out", required=True, help="CSV output path")
    pb.add_argument("--seed", type=int, default=0)
    pb.add_argument("--disttime", type=int, default=1)
    pb.add_argument("--jobs", type=int, default=1)
    pb.add_argument("--no-plot", action="store_true",
                    help="skip the figure next to the CSV")

    pl = sub.add_parser("pipeline", help="compile, estimate and convert in one run")
    _add_compile_options(pl)
    _add_estimate_options(pl)
    pl.add_argument("--hardware", help="hardware profile JSON for the physical stage")
    pl.add_argument("--out", help="combined report path (default: stdout)")
    return parser


def _add_estimate_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--approach", choices=list(est.APPROACHES), default="default")
    p.add_argument("--minimize_what", choices=list(est.OBJECTIVES),
                   default="space-time")
    p.add_argument("--error_budget", type=float, default=0.01)
    p.add_argument("--param_type", choices=["current", "projected"],
                   default="projected")
    p.add_argument("--min_d1", type=int, default=3)
    p.add_argument("--min_d2", type=int, default=3)
    p.add_argument("--max_d2", type=int, default=51)
    p.add_argument("--max_w", type=int, default=0)
    p.add_argument("--unit-config", help="JSON with 15:1 unit tiles/slices")
    p.add_argument("--trace-csv", help="write the per-cycle reserve series")
    p.add_argument("--json", dest="json_out", help="write the estimate as JSON")
    p.add_argument("--no-plot", action="store_true",
                   help="skip the figure next to the trace CSV")


def _load_layout(args, num_qubits: int):
    if args.layout_file:
        layout = parse_layout_ascii(Path(args.layout_file).read_text(encoding="utf-8"))
    else:
        layout = generate_edpc(num_qubits, args.num_lanes, args.condensed)
    layout.validate_for_circuit(num_qubits)
    return layout


def _compile_program(args):
    circuit = parse_file(args.input)
    layout = _load_layout(args, circuit.num_qubits)
    opts = SchedulerOptions(disttime=args.disttime, nostagger=args.nostagger)
    dag = lower_circuit(circuit)
    return dag, schedule(dag, layout, opts)


def _cmd_compile(args) -> int:
    dag, program = _compile_program(args)
    if args.printlli:
        text = emit_unsliced(dag) if args.printlli == "unsliced" else emit_sliced_lli(program)
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    if args.stats_json:
        Path(args.stats_json).write_text(program_stats(program).to_json(),
                                         encoding="utf-8")
    return EXIT_OK


def _estimator_inputs(args):
    hw = est.HardwareParams.named(args.param_type)
    unit = est.DistillationUnitParams()
    if args.unit_config:
        unit = est.DistillationUnitParams.from_json(
            Path(args.unit_config).read_text(encoding="utf-8"))
    bounds = est.SearchBounds(min_d1=args.min_d1, min_d2=args.min_d2,
                              max_d2=args.max_d2, max_w=args.max_w)
    return hw, unit, bounds


def _run_estimate(profile: est.ProfileInput, args) -> est.ResourceEstimate:
    hw, unit, bounds = _estimator_inputs(args)
    return est.optimize(profile, approach=args.approach,
                        minimize_what=args.minimize_what, bounds=bounds,
                        error_budget=args.error_budget, hw=hw, unit=unit)


def _emit_estimate_artifacts(estimate: est.ResourceEstimate, args) -> None:
    sys.stdout.write(est.render_table([estimate]))
    if args.json_out:
        payload = json.dumps(estimate.to_dict(), sort_keys=True, indent=2) + "\n"
        Path(args.json_out).write_text(payload, encoding="utf-8")
    if args.trace_csv:
        rows = est.trace_rows(estimate)
        import csv as _csv

        with open(args.trace_csv, "w", newline="", encoding="utf-8") as fh:
            writer = _csv.DictWriter(
                fh, fieldnames=["cycle", "consumed_cumulative", "factories_on",
                                "reserve"])
            writer.writeheader()
            writer.writerows(rows)
        if not args.no_plot:
            from .plots import render_trace_figure

            render_trace_figure(rows, Path(args.trace_csv).with_suffix(".png"))


def _cmd_estimate(args) -> int:
    raw = json.loads(Path(args.profile).read_text(encoding="utf-8"))
    profile = est.ProfileInput.from_stats_dict(raw)
    estimate = _run_estimate(profile, args)
    _emit_estimate_artifacts(estimate, args)
    return EXIT_OK


def _load_hardware(path: str | None) -> HardwareProfile:
    if path is None:
        return trapped_ion_profile()
    return HardwareProfile.from_json(Path(path).read_text(encoding="utf-8"))


def _cmd_physical(args) -> int:
    raw = json.loads(Path(args.estimate).read_text(encoding="utf-8"))
    hw = _load_hardware(args.hardware)
    cost = to_physical(int(raw["d2"]), float(raw["tau_total"]),
                       float(raw["n_total"]), hw)
    sys.stdout.write(json.dumps(cost.to_dict(), sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def _cmd_bench(args) -> int:
    rows = run_scaling(args.qubits, args.depth, args.t_fraction, args.samples,
                       args.layout_variants, base_seed=args.seed,
                       disttime=args.disttime, jobs=args.jobs)
    write_csv(rows, args.out)
    if not args.no_plot:
        from .plots import render_bench_figure

        render_bench_figure(rows, Path(args.out).with_suffix(".png"))
    failures = sum(1 for r in rows if r.status != "ok")
    sys.stderr.write(f"bench: {len(rows)} rows, {failures} failures -> {args.out}\n")
    return EXIT_OK


def _cmd_pipeline(args) -> int:
    _, program = _compile_program(args)
    stats = program_stats(program)
    profile = est.ProfileInput(stats.num_qubits, stats.num_slices,
                               stats.active_volume, stats.m_profile)
    estimate = _run_estimate(profile, args)
    report = {
        "stats": json.loads(stats.to_json()),
        "estimate": estimate.to_dict(),
        "physical": None,
    }
    if args.hardware:
        hw = _load_hardware(args.hardware)
        report["physical"] = to_physical(estimate.d2, estimate.tau_total,
                                         estimate.n_total, hw).to_dict()
    payload = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
    return EXIT_OK


_COMMANDS = {
    "compile": _cmd_compile,
    "estimate": _cmd_estimate,
    "physical": _cmd_physical,
    "bench": _cmd_bench,
    "pipeline": _cmd_pipeline,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except QasmError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except DeadlockError as exc:
        sys.stderr.write(f"scheduling deadlock: {exc}\n")
        return EXIT_DEADLOCK
    except est.InfeasibleEstimateError as exc:
        sys.stderr.write(f"estimator: {exc}\n")
        if exc.best is not None:
            sys.stderr.write(est.render_table([exc.best]))
        return EXIT_INFEASIBLE
    except (LayoutError, HardwareProfileError, est.EstimatorError, ValueError,
            OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
