"""The three standard figures, split into a data layer and a rendering layer.

figure_data() returns exactly the arrays that get plotted; render() draws
them with matplotlib. The data layer is the deterministic contract (image
bytes may vary across backend versions), and input files are only ever
read.

    fig2  P(z) from the latest snapshot
    fig3  component proportionality overlays, real and imaginary parts,
          using the fitted ratios recorded in the summary
    fig4  branch centroid trajectories over the two-peak window, annotated
          with the windowed phase difference
"""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .data import (
    MissingDataError,
    latest_snapshot_path,
    load_snapshot,
    load_summary_phases,
    load_summary_ratios,
    load_timeseries,
)

FIGURE_IDS = ("fig2", "fig3", "fig4")


@dataclass(frozen=True)
class FigureSpec:
    run_dir: Path
    figure_id: str
    out_path: Path
    dpi: int = 150
    figsize: tuple[float, float] = (8.0, 5.0)
    style: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise ValueError(
                f"unknown figure id {self.figure_id!r}; known: {', '.join(FIGURE_IDS)}"
            )


def _fig2_data(run_dir: Path) -> dict:
    snap = load_snapshot(latest_snapshot_path(run_dir))
    p = sum(np.abs(snap[name]) ** 2 for name in ("uu", "ud", "du", "dd"))
    return {"tau": snap["tau"], "z": snap["z"], "p": p}


def _fig3_data(run_dir: Path) -> dict:
    snap = load_snapshot(latest_snapshot_path(run_dir))
    ratios = load_summary_ratios(Path(run_dir) / "summary.txt")
    if "up2" not in ratios or "down2" not in ratios:
        raise MissingDataError("summary lacks ratios for both component pairs")
    scaled_du = ratios["up2"] * snap["du"]
    scaled_dd = ratios["down2"] * snap["dd"]
    return {
        "tau": snap["tau"],
        "z": snap["z"],
        "c_up2": ratios["up2"],
        "c_down2": ratios["down2"],
        "re_uu": snap["uu"].real, "re_scaled_du": scaled_du.real,
        "re_ud": snap["ud"].real, "re_scaled_dd": scaled_dd.real,
        "im_uu": snap["uu"].imag, "im_scaled_du": scaled_du.imag,
        "im_ud": snap["ud"].imag, "im_scaled_dd": scaled_dd.imag,
    }


def _fig4_data(run_dir: Path) -> dict:
    cols = load_timeseries(Path(run_dir) / "timeseries.csv")
    for needed in ("tau", "branch_a_z", "branch_b_z"):
        if needed not in cols:
            raise MissingDataError(f"timeseries lacks column {needed!r}")
    ok = np.isfinite(cols["branch_a_z"]) & np.isfinite(cols["branch_b_z"])
    if not np.any(ok):
        raise MissingDataError("no two-peak window in the time series")
    out = {
        "t": cols["tau"][ok],
        "z_a": cols["branch_a_z"][ok],
        "z_b": cols["branch_b_z"][ok],
    }
    try:
        phases = load_summary_phases(Path(run_dir) / "summary.txt")
    except MissingDataError:
        phases = {}
    out.update({f"delta_phi_{k}": v for k, v in phases.items()})
    return out


def figure_data(spec: FigureSpec) -> dict:
    """The arrays a figure plots, exactly as read from the exported files."""
    builders = {"fig2": _fig2_data, "fig3": _fig3_data, "fig4": _fig4_data}
    return builders[spec.figure_id](Path(spec.run_dir))


def _render_fig2(ax_grid, data) -> None:
    ax = ax_grid[0][0]
    ax.plot(data["z"], data["p"], lw=1.0, color="k")
    ax.set_xlabel("z")
    ax.set_ylabel("P(z)")
    ax.set_title(f"cantilever position distribution, tau = {data['tau']:g}")


def _render_fig3(ax_grid, data) -> None:
    panels = [
        ("re_uu", "re_scaled_du", "Re u_uu vs Re(c u_du)"),
        ("re_ud", "re_scaled_dd", "Re u_ud vs Re(c u_dd)"),
        ("im_uu", "im_scaled_du", "Im u_uu vs Im(c u_du)"),
        ("im_ud", "im_scaled_dd", "Im u_ud vs Im(c u_dd)"),
    ]
    for ax, (solid, dots, title) in zip((a for row in ax_grid for a in row), panels):
        ax.plot(data["z"], data[solid], lw=0.8, color="k")
        ax.plot(data["z"][::8], data[dots][::8], ".", ms=2.5, color="tab:red")
        ax.set_title(title, fontsize=8)
        ax.set_xlabel("z", fontsize=8)
        ax.tick_params(labelsize=7)


def _render_fig4(ax_grid, data) -> None:
    ax = ax_grid[0][0]
    ax.plot(data["t"], data["z_a"], ".", ms=2, color="tab:blue", label="branch a (s2 up)")
    ax.plot(data["t"], data["z_b"], ".", ms=2, color="tab:orange", label="branch b (s2 down)")
    ax.set_xlabel("tau")
    ax.set_ylabel("Z_max")
    ax.set_title("branch peak trajectories")
    ax.legend(loc="upper left", fontsize=8)
    if "delta_phi_final" in data:
        ax.text(0.98, 0.02,
                f"windowed phase difference: first = {data['delta_phi_first']:.3f}, "
                f"final = {data['delta_phi_final']:.3f} rad",
                transform=ax.transAxes, ha="right", va="bottom", fontsize=8)


def render(spec: FigureSpec) -> Path:
    """Build the figure's data arrays and write the image file."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    data = figure_data(spec)
    nrows, ncols = (2, 2) if spec.figure_id == "fig3" else (1, 1)
    fig, axes = plt.subplots(nrows, ncols, figsize=spec.figsize, squeeze=False)
    try:
        {"fig2": _render_fig2, "fig3": _render_fig3, "fig4": _render_fig4}[
            spec.figure_id](axes, data)
        fig.tight_layout()
        out = Path(spec.out_path)
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out, dpi=spec.dpi)
    finally:
        plt.close(fig)
    return Path(spec.out_path)
