"""Figure rendering from sweep tables.

Figure 1/2: thermal-to-zero-temperature force ratio theta vs separation,
one solid curve per sphere radius (increasing radii bottom to top at small
separations), the PFA ratio dashed, and for figure 1 the dipole-limit
asymptote dotted.  Figure 3: plasma/Drude force ratio per radius with the
PFA prediction dashed.  The separation axis is logarithmic.  Rendering is
deterministic and recomputes no physics.
"""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .reader import read_sweep_csv

_TITLES = {
    1: "Perfect reflector: thermal / zero-temperature force",
    2: "Drude model: thermal / zero-temperature force",
    3: "Plasma / Drude force ratio",
}
_YLABEL = {1: r"$F(L,T)/F(L,0)$", 2: r"$F(L,T)/F(L,0)$",
           3: r"$F_\mathrm{plas}/F_\mathrm{Drud}$"}


@dataclass(frozen=True)
class FigureSpec:
    csv_path: str
    figure_id: int
    out_path: str
    x_range: tuple | None = None
    y_range: tuple | None = None

    def __post_init__(self):
        if self.figure_id not in (1, 2, 3):
            raise ValueError("figure_id must be 1, 2 or 3")


def render(spec):
    """Render one figure; returns the output path."""
    table = read_sweep_csv(spec.csv_path, spec.figure_id)
    fig, ax = plt.subplots(figsize=(6.0, 4.2), dpi=150)

    value_col = ("theta" if spec.figure_id in (1, 2)
                 else "ratio_plasma_drude")
    ref_col = ("theta_pfa" if spec.figure_id in (1, 2)
               else "ratio_pfa_plasma_drude")

    for radius in table.radii():
        pts = table.series(radius, value_col)
        ax.plot([p[0] for p in pts], [p[1] for p in pts], "-",
                label=f"R = {radius:g} um")
        if spec.figure_id == 1:
            overlay = [p for p in table.series(radius, "theta_dipole")
                       if p[1] is not None]
            if overlay:
                ax.plot([p[0] for p in overlay], [p[1] for p in overlay],
                        ":", color="gray", linewidth=1.0,
                        label=None if radius != table.radii()[0]
                        else "dipole limit")

    # the PFA reference: theta_pfa is radius-independent for figs 1/2,
    # radius-dependent for fig 3
    if spec.figure_id == 3:
        for radius in table.radii():
            pts = table.series(radius, ref_col)
            ax.plot([p[0] for p in pts], [p[1] for p in pts], "--",
                    color="black", linewidth=1.0,
                    label="PFA" if radius == table.radii()[0] else None)
    else:
        seen = {}
        for row in table.rows:
            seen.setdefault(row["L_um"], row[ref_col])
        pts = sorted(seen.items())
        ax.plot([p[0] for p in pts], [p[1] for p in pts], "--",
                color="black", linewidth=1.0, label="PFA")

    ax.set_xscale("log")
    ax.set_xlabel(r"separation $L$ (um)")
    ax.set_ylabel(_YLABEL[spec.figure_id])
    ax.set_title(_TITLES[spec.figure_id])
    if spec.figure_id in (1, 2):
        ax.axhline(1.0, color="0.8", linewidth=0.7, zorder=0)
    if spec.x_range:
        ax.set_xlim(*spec.x_range)
    if spec.y_range:
        ax.set_ylim(*spec.y_range)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(spec.out_path)
    plt.close(fig)
    return spec.out_path
