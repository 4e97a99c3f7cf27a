"""Figure rendering for the report paths: scaling plots next to benchmark
CSVs and reserve traces next to estimator trace CSVs."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_bench_figure(rows, path) -> None:
    """Mean slices against qubit count (or depth, whichever varies), one
    series per layout variant, on log-log axes when sweeping qubits."""
    ok = [r for r in rows if r.status == "ok"]
    if not ok:
        return
    sweep_qubits = len({r.qubits for r in ok}) >= len({r.depth for r in ok})
    x_of = (lambda r: r.qubits) if sweep_qubits else (lambda r: r.depth)
    fig, ax = plt.subplots(figsize=(6, 4))
    for layout in sorted({r.layout for r in ok}):
        series: dict[int, list[int]] = {}
        for r in ok:
            if r.layout == layout:
                series.setdefault(x_of(r), []).append(r.slices)
        xs = sorted(series)
        ys = [sum(series[x]) / len(series[x]) for x in xs]
        ax.plot(xs, ys, marker="o", label=layout)
    if sweep_qubits:
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("logical qubits")
    else:
        ax.set_xlabel("circuit depth")
    ax.set_ylabel("slices")
    ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_trace_figure(rows, path) -> None:
    """Reserve size and factories-on per distillation cycle."""
    if not rows:
        return
    cycles = [r["cycle"] for r in rows]
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6, 5), sharex=True)
    ax1.step(cycles, [r["reserve"] for r in rows], where="post")
    ax1.set_ylabel("states in reserve")
    ax1.grid(True, alpha=0.3)
    ax2.step(cycles, [r["factories_on"] for r in rows], where="post", color="tab:orange")
    ax2.set_ylabel("factories on")
    ax2.set_xlabel("distillation cycle")
    ax2.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
