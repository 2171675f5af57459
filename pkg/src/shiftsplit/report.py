"""Benchmark output: delimited tables and the matplotlib figures that
accompany them.

Markdown and CSV share the column order label, alpha, iters, cpu_s, Rk,
converged. Rows that failed to converge render a dagger in markdown and an
empty iters cell in CSV. The figure helpers write image files next to the
delimited output: residual histories for solve runs, an eigenvalue scatter
for spectrum exports.
"""

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "TableRow",
    "emit_table",
    "format_sci",
    "render_convergence_figure",
    "render_spectrum_figure",
]


@dataclass
class TableRow:
    """One benchmark result."""

    label: str
    alpha_used: float
    iters: int
    cpu_seconds: float
    final_rk: float
    converged: bool
    min_cpu: bool = False
    history: list[float] | None = field(default=None, repr=False)


def format_sci(x):
    """Scientific notation with one decimal and a bare exponent, e.g. 8.4e-8."""
    x = float(x)
    if x == 0.0:
        return "0"
    mantissa, _, exponent = f"{x:.1e}".partition("e")
    return f"{mantissa}e{int(exponent)}"


def _alpha_cell(row):
    if row.alpha_used is None or math.isnan(row.alpha_used):
        return "--"
    return f"{row.alpha_used:g}"


def emit_table(rows, fmt="markdown"):
    """Render rows as a markdown or CSV table string."""
    if fmt == "markdown":
        lines = [
            "| label | alpha | iters | cpu_s | Rk | converged |",
            "| --- | ---: | ---: | ---: | ---: | --- |",
        ]
        for row in rows:
            iters = str(row.iters) if row.converged else "†"
            cpu = f"{row.cpu_seconds:.2f}"
            if row.min_cpu:
                cpu = f"**{cpu}**"
            lines.append(
                f"| {row.label} | {_alpha_cell(row)} | {iters} | {cpu} "
                f"| {format_sci(row.final_rk)} | {'yes' if row.converged else 'no'} |"
            )
        return "\n".join(lines) + "\n"
    if fmt == "csv":
        lines = ["label,alpha,iters,cpu_s,Rk,converged"]
        for row in rows:
            iters = str(row.iters) if row.converged else ""
            lines.append(
                f"{row.label},{_alpha_cell(row)},{iters},{row.cpu_seconds:.6f},"
                f"{format_sci(row.final_rk)},{'true' if row.converged else 'false'}"
            )
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown table format '{fmt}'")


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_convergence_figure(rows, path):
    """Semilogy residual histories, one curve per table row."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for row in rows:
        if not row.history:
            continue
        name = row.label if math.isnan(row.alpha_used) else f"{row.label}, alpha={row.alpha_used:g}"
        ax.semilogy(range(len(row.history)), row.history, label=name)
    ax.set_xlabel("iteration")
    ax.set_ylabel("relative residual")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_spectrum_figure(report, path):
    """Scatter plot of one exported spectrum."""
    plt = _pyplot()
    values = np.asarray(report.eigenvalues, dtype=np.complex128)
    fig, ax = plt.subplots(figsize=(5.4, 4.6))
    ax.scatter(values.real, values.imag, s=12, marker="x", linewidths=0.8)
    if report.containment is not None:
        circle = plt.Circle(
            (report.containment.center.real, report.containment.center.imag),
            report.containment.radius,
            fill=False,
            linestyle="--",
            color="gray",
            linewidth=0.8,
        )
        ax.add_patch(circle)
    ax.axhline(0.0, color="black", linewidth=0.5)
    ax.axvline(0.0, color="black", linewidth=0.5)
    title = report.label if report.alpha is None else f"{report.label}, alpha={report.alpha:g}"
    ax.set_title(title)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
