"""Figures for grid verdicts and resource comparisons, written straight to files."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

from .multi import QuantumCode  # noqa: E402
from .resources import ResourceModel, ResourceReport, flag_count, shor_estimate  # noqa: E402
from .search import FT, NOT_FT, GridResult  # noqa: E402

_CODES = {NOT_FT: 0, FT: 1}


def grid_figure(grid: GridResult, path: str | os.PathLike) -> None:
    """Heat map of the (t, r) verdicts; skipped cells are grey."""
    data = [[_CODES.get(grid.verdicts[(t, r)], 2) for r in grid.rs] for t in grid.ts]
    fig, ax = plt.subplots(figsize=(1.0 + 0.8 * len(grid.rs), 1.0 + 0.7 * len(grid.ts)))
    ax.imshow(data, cmap=ListedColormap(["#d9534f", "#5cb85c", "#bbbbbb"]), vmin=0, vmax=2)
    for i, t in enumerate(grid.ts):
        for j, r in enumerate(grid.rs):
            v = grid.verdicts[(t, r)]
            ax.text(j, i, v if v in _CODES else "?", ha="center", va="center", fontsize=12)
    ax.set_xticks(range(len(grid.rs)), [str(r) for r in grid.rs])
    ax.set_yticks(range(len(grid.ts)), [str(t) for t in grid.ts])
    ax.set_xlabel("repetitions r")
    ax.set_ylabel("t")
    ax.set_title(f"w = {grid.w}")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def resources_figure(
    reports: list[ResourceReport],
    path: str | os.PathLike,
    codes: list[QuantumCode] | None = None,
    mu: float = 0.0,
    timing: str = "back-to-back",
) -> None:
    """Bar chart of qubit counts; with ``codes``, also Shor estimates against reset time."""
    ncols = 2 if codes else 1
    fig, axes = plt.subplots(1, ncols, figsize=(6 * ncols, 4), squeeze=False)
    ax = axes[0][0]
    labels = ["shor", "flag+1", "steane", "knill"]
    width = 0.8 / len(labels)
    for k, lab in enumerate(labels):
        vals = [getattr(r, {"flag+1": "flag_total"}.get(lab, lab)) for r in reports]
        ax.bar([i + k * width for i in range(len(reports))], vals, width, label=lab)
    ax.set_xticks([i + 0.4 - width / 2 for i in range(len(reports))], [r.code for r in reports])
    ax.set_ylabel("ancilla qubits")
    ax.set_yscale("log")
    ax.legend(frameon=False)
    if codes:
        ax2 = axes[0][1]
        taus = [0.5 * k for k in range(0, 161)]
        for code, rep in zip(codes, reports):
            ys = [shor_estimate(code, ResourceModel(tau, mu), rep.s, timing) for tau in taus]
            line = ax2.plot(taus, ys, label=f"{code.name} shor")[0]
            flag = flag_count(code.t, rep.s, code.W, rep.reps) + 1
            ax2.axhline(flag, color=line.get_color(), ls="--", lw=1)
        ax2.set_xlabel("reset time tau (CNOT units)")
        ax2.set_ylabel("qubits")
        ax2.set_title(f"mu = {mu:g}; dashed: flag + syndrome")
        ax2.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
