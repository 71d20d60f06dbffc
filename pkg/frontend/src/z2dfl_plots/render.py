"""Figure rendering for the three table kinds.

Pure consumer of parsed tables; deterministic output for identical inputs
(fixed layout, no timestamps) and never mutates its input files.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .io import SCHEMAS, ParseError, Table, read_table  # noqa: E402

KINDS = tuple(SCHEMAS)

INSET_WINDOW = (110.0, 150.0)


@dataclass(frozen=True)
class PlotJob:
    kind: str
    inputs: tuple[str, ...]
    output: str
    top_k: int = 2
    title: str = ""
    dpi: int = 150

    def __post_init__(self):
        if self.kind not in SCHEMAS:
            raise ParseError(f"unknown figure kind {self.kind!r}; "
                             f"choose from {sorted(SCHEMAS)}")
        if not self.inputs:
            raise ParseError("at least one input file is required")
        if self.top_k < 1:
            raise ParseError("top_k must be >= 1")


def _curve_label(path: Path) -> str:
    stem = path.stem
    for prefix in ("fidelity_", "steady_"):
        if stem.startswith(prefix):
            stem = stem[len(prefix):]
    return stem


def _render_fidelity(tables: list[Table], job: PlotJob, fig):
    ax = fig.add_subplot(111)
    lo, hi = INSET_WINDOW
    any_window = False
    for tab in tables:
        t, f = tab.column("t"), tab.column("fidelity")
        ax.plot(t, f, label=_curve_label(tab.path))
        any_window |= bool(((t >= lo) & (t <= hi)).any())
    ax.set_xlabel("t [1/J]")
    ax.set_ylabel("fidelity F(t)")
    ax.set_ylim(bottom=0.0)
    ax.legend(loc="upper left", fontsize=8)
    if any_window:
        inset = ax.inset_axes([0.45, 0.5, 0.5, 0.36])
        x_hi = lo
        for tab in tables:
            t, f = tab.column("t"), tab.column("fidelity")
            mask = (t >= lo) & (t <= hi)
            if mask.any():
                inset.plot(t[mask], f[mask])
                mean = float(f[mask].mean())
                inset.axhline(mean, ls=":", lw=0.8)
                x_hi = max(x_hi, float(t[mask].max()))
        inset.set_xlim(lo, min(hi, x_hi) if x_hi > lo else hi)
        inset.set_title(f"window [{lo:g}, {hi:g}]", fontsize=7)
        inset.tick_params(labelsize=6)


def _render_profile(tables: list[Table], job: PlotJob, fig):
    if len(tables) != 1:
        raise ParseError("diagonal_profile takes exactly one input file")
    tab = tables[0]
    idx, val = tab.column("index"), tab.column("value")
    bits = tab.column("bitstring")
    ax = fig.add_subplot(111)
    ax.stem(idx, val, basefmt=" ", markerfmt=".")
    ax.set_xlabel("basis index")
    ax.set_ylabel("diagonal weight")
    order = val.argsort()[::-1][: job.top_k]
    for i in order:
        ax.annotate(
            f"{int(idx[i])}: |{bits[i]}>",
            xy=(idx[i], val[i]),
            xytext=(0, 6),
            textcoords="offset points",
            ha="center",
            fontsize=7,
        )
    ax.set_ylim(0.0, float(val.max()) * 1.25)


def _render_sweep(tables: list[Table], job: PlotJob, fig):
    ax = fig.add_subplot(111)
    for tab in tables:
        a, f = tab.column("alpha"), tab.column("F_ss")
        conv = tab.column("converged").astype(bool)
        ax.plot(a, f, marker="o", ms=3, label=_curve_label(tab.path))
        if (~conv).any():
            ax.plot(a[~conv], f[~conv], ls="", marker="x", color="red",
                    label="not converged")
    ax.set_xlabel(r"dissipation phase $\alpha$")
    ax.set_ylabel(r"$F_{ss}$")
    if len(tables) > 1:
        ax.legend(fontsize=8)


_RENDERERS = {
    "fidelity_timeseries": _render_fidelity,
    "diagonal_profile": _render_profile,
    "alpha_sweep": _render_sweep,
}


def render(job: PlotJob) -> Path:
    """Render one figure; returns the output path."""
    tables = [read_table(p, job.kind) for p in job.inputs]
    fig = plt.figure(figsize=(6.0, 4.0))
    try:
        _RENDERERS[job.kind](tables, job, fig)
        if job.title:
            fig.suptitle(job.title)
        out = Path(job.output)
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out, dpi=job.dpi, metadata={"Software": None})
    finally:
        plt.close(fig)
    return out
