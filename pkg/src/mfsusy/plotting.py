"""Partner-potential figures rendered to SVG with matplotlib.

Figures are drawn on a bare :class:`matplotlib.figure.Figure` (no pyplot
state), with the SVG hash salt and date fixed so repeated runs produce
identical files.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import matplotlib
import numpy as np
from matplotlib.figure import Figure

from .errors import DomainError, OutputError
from .numeric.critical import find_critical_l
from .susy import u_minus, u_plus
from .tables import OutputTable, make_metadata

PANELS = {
    "a": {"l_values": (1, 5, 10), "kind": "minus", "rho": (0.3, 5.0), "ylim": (-25.0, 25.0)},
    "b": {"l_values": (6, 7, 8), "kind": "plus", "rho": (0.6, 4.0), "ylim": (0.0, 10.0)},
}


@dataclass
class Curve:
    label: str
    x: np.ndarray
    y: np.ndarray
    l: float

    def __post_init__(self):
        if np.any(np.diff(self.x) <= 0):
            raise DomainError(f"curve {self.label!r}: x samples must be strictly increasing")


@dataclass
class PlotSpec:
    curves: list
    xlabel: str
    ylabel: str
    xlim: tuple
    ylim: tuple
    title: str = ""
    markers: list = field(default_factory=list)
    output: str | None = None


def fig1_panel(panel: str, samples: int = 400) -> PlotSpec:
    """Sampled curves for panel 'a' (U-, l = 1, 5, 10) or 'b' (U+, l = 6, 7, 8).

    Panel 'b' carries a marker at the critical point (rho_cr, U+(rho_cr; l_cr)).
    """
    if panel not in PANELS:
        raise DomainError(f"panel must be 'a' or 'b', got {panel!r}")
    if samples < 2:
        raise DomainError("need at least two samples per curve")
    cfg = PANELS[panel]
    rho = np.linspace(*cfg["rho"], samples)
    fn = u_minus if cfg["kind"] == "minus" else u_plus
    curves = [Curve(f"l={l}", rho, np.asarray(fn(l, rho)), l) for l in cfg["l_values"]]
    markers = []
    if panel == "b":
        cp = find_critical_l()
        markers.append(
            {
                "label": f"critical l={cp.l_cr:.3f}",
                "x": cp.rho_cr,
                "y": float(u_plus(cp.l_cr, cp.rho_cr)),
            }
        )
    sign = "-" if cfg["kind"] == "minus" else "+"
    return PlotSpec(
        curves=curves,
        xlabel=r"$\rho$",
        ylabel=rf"$U^{{{sign}}}_{{\mathrm{{eff}}}}$ [$\mathcal{{E}}_0$]",
        xlim=cfg["rho"],
        ylim=cfg["ylim"],
        title=f"({panel})",
        markers=markers,
    )


def sidecar_table(spec: PlotSpec, panel: str) -> OutputTable:
    kind = PANELS[panel]["kind"]
    table = OutputTable(
        ["l", "rho", f"u_{kind}"],
        metadata=make_metadata("plot-fig1", {"panel": panel, "samples": len(spec.curves[0].x)}),
    )
    for c in spec.curves:
        for x, y in zip(c.x, c.y):
            table.append([c.l, float(x), float(y)])
    if spec.markers:
        table.metadata["markers"] = spec.markers
    return table


def render_svg(spec: PlotSpec, path) -> None:
    """Draw ``spec`` and save it as a standalone SVG file."""
    with matplotlib.rc_context({"svg.hashsalt": "mfsusy", "svg.fonttype": "path"}):
        fig = Figure(figsize=(5.0, 3.6))
        ax = fig.add_subplot(1, 1, 1)
        for c in spec.curves:
            ax.plot(c.x, c.y, label=c.label, lw=1.2)
        for m in spec.markers:
            ax.plot([m["x"]], [m["y"]], "ko", ms=4, label=m["label"])
        ax.axhline(0.0, color="0.6", lw=0.6)
        ax.set_xlim(*spec.xlim)
        ax.set_ylim(*spec.ylim)
        ax.set_xlabel(spec.xlabel)
        ax.set_ylabel(spec.ylabel)
        if spec.title:
            ax.set_title(spec.title, loc="left")
        ax.legend(frameon=False, fontsize=8)
        fig.tight_layout()
        try:
            fig.savefig(path, format="svg", metadata={"Date": None})
        except OSError as exc:
            raise OutputError(f"cannot write {path}: {exc}") from exc
    spec.output = os.fspath(path)


def sidecar_path(path) -> str:
    root, _ = os.path.splitext(os.fspath(path))
    return root + ".csv"


def plot_fig1(panel: str, path, samples: int = 400):
    """Render a panel to ``path`` and write its sampled curves next to it as CSV.

    Returns ``(spec, table, csv_path)``.
    """
    spec = fig1_panel(panel, samples)
    render_svg(spec, path)
    table = sidecar_table(spec, panel)
    csv_path = sidecar_path(path)
    try:
        with open(csv_path, "w", newline="\n") as fh:
            fh.write(table.to_csv())
    except OSError as exc:
        raise OutputError(f"cannot write {csv_path}: {exc}") from exc
    return spec, table, csv_path
