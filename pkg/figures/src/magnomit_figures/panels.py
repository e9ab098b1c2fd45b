"""Panel rendering from magnomit sweep CSVs.

Consumes only the CSV table the magnomit CLI emits (fixed header
``delta_rad_s,eps_R,eps_I,T_re,T_im,T_sq,phase_rad,tau_s``) plus a small
declarative spec, and produces one labelled multi-curve panel per spec.
Inputs are never modified; rendering is deterministic so the same spec and
CSVs reproduce the same image bytes (renderer version metadata aside).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

EXPECTED_HEADER = ["delta_rad_s", "eps_R", "eps_I", "T_re", "T_im", "T_sq",
                   "phase_rad", "tau_s"]

#: panel type -> (CSV column, y-axis label)
PANEL_COLUMNS = {
    "absorption": ("eps_R", r"absorption $\epsilon_R$"),
    "dispersion": ("eps_I", r"dispersion $\epsilon_I$"),
    "transmission": ("T_sq", r"transmission $|T|^2$"),
    "delay": ("tau_s", r"group delay $\tau$ (s)"),
}

X_SCALES = ("omega_b", "rad_s")

plt.rcParams["svg.hashsalt"] = "magnomit-figures"


class SchemaMismatch(ValueError):
    """A CSV does not carry the fixed sweep-table schema."""

    def __init__(self, column: str, path: str):
        self.column = column
        self.path = path
        super().__init__(f"{path}: missing or misplaced column {column!r}")


class EmptySpec(ValueError):
    """The spec lists no curves; nothing to render."""


@dataclass(frozen=True)
class Curve:
    csv: str
    label: str


@dataclass(frozen=True)
class FigureSpec:
    """One panel: which CSVs, which observable, how to scale the x axis."""

    panel: str
    curves: list[Curve]
    out: str
    x_scale: str = "omega_b"
    omega_b_rad_s: float | None = None
    title: str | None = None
    dpi: int = 150
    figsize: tuple[float, float] = field(default=(6.4, 4.2))

    def __post_init__(self):
        if self.panel not in PANEL_COLUMNS:
            raise ValueError(
                f"panel must be one of {sorted(PANEL_COLUMNS)}, got {self.panel!r}")
        if self.x_scale not in X_SCALES:
            raise ValueError(f"x_scale must be one of {X_SCALES}")
        if self.x_scale == "omega_b" and not self.omega_b_rad_s:
            raise ValueError("omega_b_rad_s is required when x_scale='omega_b'")

    @staticmethod
    def from_file(path: str) -> "FigureSpec":
        doc = json.loads(Path(path).read_text())
        curves = [Curve(csv=c["csv"], label=c.get("label", c["csv"]))
                  for c in doc.get("curves", [])]
        return FigureSpec(
            panel=doc["panel"],
            curves=curves,
            out=doc["out"],
            x_scale=doc.get("x_scale", "omega_b"),
            omega_b_rad_s=doc.get("omega_b_rad_s"),
            title=doc.get("title"),
            dpi=int(doc.get("dpi", 150)),
        )


def read_sweep_csv(path: str) -> dict[str, np.ndarray]:
    """Load a sweep table, enforcing the fixed schema."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise SchemaMismatch(EXPECTED_HEADER[0], path)
        header = [h.strip() for h in header]
        for col in EXPECTED_HEADER:
            if col not in header:
                raise SchemaMismatch(col, path)
        rows = [[float(v) for v in row] for row in reader if row]
    data = np.asarray(rows, dtype=float)
    if data.size == 0:
        data = data.reshape(0, len(header))
    return {name: data[:, header.index(name)] for name in EXPECTED_HEADER}


def render_panel(spec: FigureSpec) -> str:
    """Render one panel to ``spec.out``; returns the output path.

    Raises EmptySpec before touching the output file when no curves are
    listed, and SchemaMismatch when a CSV lacks a required column.
    """
    if not spec.curves:
        raise EmptySpec("spec lists no curves")
    column, ylabel = PANEL_COLUMNS[spec.panel]

    loaded = [(read_sweep_csv(c.csv), c.label) for c in spec.curves]

    fig, ax = plt.subplots(figsize=spec.figsize)
    for data, label in loaded:
        x = data["delta_rad_s"]
        if spec.x_scale == "omega_b":
            x = x / spec.omega_b_rad_s
        ax.plot(x, data[column], label=label, linewidth=1.2)

    if spec.x_scale == "omega_b":
        ax.set_xlabel(r"$\delta/\omega_b$")
    else:
        ax.set_xlabel(r"$\delta$ (rad/s)")
    ax.set_ylabel(ylabel)
    if spec.title:
        ax.set_title(spec.title)
    if spec.panel == "delay":
        ax.axhline(0.0, color="0.4", linewidth=0.8)
        ax.annotate("slow light  $\\tau > 0$", xy=(0.02, 0.96),
                    xycoords="axes fraction", va="top", fontsize=8)
        ax.annotate("fast light  $\\tau < 0$", xy=(0.02, 0.04),
                    xycoords="axes fraction", va="bottom", fontsize=8)
    ax.legend(fontsize=8)
    fig.tight_layout()

    out = Path(spec.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    # strip the renderer-version text chunk so reruns are byte-identical
    fmt = out.suffix.lstrip(".").lower() or "png"
    metadata = {"Software": None} if fmt == "png" else {"Date": None}
    fig.savefig(out, dpi=spec.dpi, metadata=metadata)
    plt.close(fig)
    return str(out)
